#!/usr/bin/env python3
import hashlib
import logging
import os
import pickle
import zipfile
from dataclasses import replace
from typing import Optional

import torch

from ..Errors import CheckpointError, SpecMismatchError
from .ClassifierModel import ClassifierModel, build_model
from .Specs import BackboneSpec, HeadSpec

CHECKPOINT_FORMAT = "muzzleid-checkpoint"
CHECKPOINT_VERSION = 1

_logger = logging.getLogger(__name__)


def _digest(state_dict: dict) -> str:
    h = hashlib.sha256()
    for key in sorted(state_dict):
        h.update(key.encode("utf-8"))
        h.update(state_dict[key].detach().cpu().contiguous().numpy().tobytes())
    return h.hexdigest()


def _architecture(backbone: BackboneSpec, head: HeadSpec) -> tuple:
    # pretraining only changes the initial weights, not the stored architecture
    return backbone.name, backbone.output_dim, head


def save_checkpoint(model: ClassifierModel, path: str, classes: Optional[list] = None,
                    training_config: Optional[dict] = None):
    state_dict = {k: v.detach().cpu() for k, v in model.state_dict().items()}
    payload = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "backbone": model.backbone_spec.to_dict(),
        "head": model.head_spec.to_dict(),
        "classes": list(classes or []),
        "training_config": dict(training_config or {}),
        "digest": _digest(state_dict),
        "state_dict": state_dict,
    }
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    torch.save(payload, path)
    _logger.info("Checkpoint saved to %s", path)


def read_checkpoint(path: str) -> dict:
    try:
        payload = torch.load(path, map_location="cpu", weights_only=True)
    except (RuntimeError, EOFError, OSError, ValueError, pickle.UnpicklingError, zipfile.BadZipFile) as e:
        raise CheckpointError("Unable to read checkpoint %s: %s" % (path, e)) from e
    if not isinstance(payload, dict) or payload.get("format") != CHECKPOINT_FORMAT or "state_dict" not in payload:
        raise CheckpointError("%s is not a model checkpoint" % path)
    if payload.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError("Unsupported checkpoint version %s" % payload.get("version"))
    if _digest(payload["state_dict"]) != payload.get("digest"):
        raise CheckpointError("Checkpoint %s failed its integrity check" % path)
    payload["backbone"] = BackboneSpec.from_dict(payload["backbone"])
    payload["head"] = HeadSpec.from_dict(payload["head"])
    return payload


def load_checkpoint(model: ClassifierModel, path: str) -> dict:
    """Loads weights into an existing model; the stored specs must match the model's."""
    payload = read_checkpoint(path)
    stored = _architecture(payload["backbone"], payload["head"])
    if stored != _architecture(model.backbone_spec, model.head_spec):
        raise SpecMismatchError((payload["backbone"], payload["head"]), (model.backbone_spec, model.head_spec))
    model.load_state_dict(payload["state_dict"])
    _logger.info("Checkpoint loaded from %s", path)
    return payload


def restore_model(path: str) -> tuple[ClassifierModel, dict]:
    """Rebuilds the model described by a checkpoint, without downloading pretrained weights."""
    payload = read_checkpoint(path)
    model = build_model(replace(payload["backbone"], pretrained=False), payload["head"])
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return model, payload
