#!/usr/bin/env python3
import logging
import time
from dataclasses import dataclass

import torch

from ..augment.Pipeline import AugmentationConfig, build_pipeline, EVAL_MODE, DEFAULT_TARGET_SIZE
from ..model.Checkpoint import restore_model
from ..model.ClassifierModel import forward_probabilities
from ..utils.ImageIO import load_image


@dataclass(frozen=True)
class Identification:
    predicted_class: str
    confidence: float
    top_k: tuple[tuple[str, float], ...]
    latency_seconds: float


class Identifier:
    """Ranks the enrolled animals for a muzzle image with a trained checkpoint."""

    def __init__(self, checkpoint_path: str, device: torch.device = torch.device("cpu")):
        self._logger = logging.getLogger(__name__)
        self._model, payload = restore_model(checkpoint_path)
        self._model.to(device)
        self._device = device
        self.classes = list(payload["classes"])
        if len(self.classes) != self._model.head_spec.num_classes:
            self.classes = [str(i) for i in range(self._model.head_spec.num_classes)]
        target_size = int(payload["training_config"].get("target_size", DEFAULT_TARGET_SIZE))
        self._pipeline = build_pipeline(AugmentationConfig(target_size=target_size), EVAL_MODE)
        self._logger.info("Loaded %s with %d classes from %s", self._model.backbone_spec.name,
                          len(self.classes), checkpoint_path)

    def identify(self, image_path: str, k: int = 1) -> Identification:
        if not 1 <= k <= len(self.classes):
            raise ValueError("top-k must be in [1, %d], got %s" % (len(self.classes), k))
        start = time.perf_counter()
        batch = self._pipeline(load_image(image_path)).unsqueeze(0).to(self._device)
        with torch.inference_mode():
            probabilities = forward_probabilities(self._model, batch)[0].cpu()
        values, indices = torch.topk(probabilities, k)
        top_k = tuple((self.classes[int(i)], float(p)) for p, i in zip(values, indices))
        latency = time.perf_counter() - start
        self._logger.debug("%s -> %s (%.4f) in %.3fs", image_path, top_k[0][0], top_k[0][1], latency)
        return Identification(top_k[0][0], top_k[0][1], top_k, latency)


def identify(checkpoint_path: str, image_path: str, k: int = 1) -> Identification:
    return Identifier(checkpoint_path).identify(image_path, k)
