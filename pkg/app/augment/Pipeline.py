#!/usr/bin/env python3
import logging
from dataclasses import dataclass, field

import torch
from torchvision.transforms import functional as TF

from ..utils.PixelTensor import check_pixel_tensor
from .Transforms import resize, horizontal_flip, color_jitter, random_gaussian_blur, random_rotation, MAX_HUE_FACTOR

DEFAULT_TARGET_SIZE = 300
# statistics of the ImageNet pretraining corpus shared by both torchvision backbones
IMAGENET_MEAN = (0.485, 0.456, 0.406)
IMAGENET_STD = (0.229, 0.224, 0.225)

TRAIN_MODE = "train"
EVAL_MODE = "eval"


@dataclass(frozen=True)
class ColorJitterConfig:
    brightness: float = 0.2
    contrast: float = 0.2
    saturation: float = 0.2
    hue: float = 0.05


@dataclass(frozen=True)
class BlurConfig:
    radius: int = 1
    sigma_min: float = 0.1
    sigma_max: float = 2.0


@dataclass(frozen=True)
class AugmentationConfig:
    target_size: int = DEFAULT_TARGET_SIZE
    flip_probability: float = 0.5
    jitter: ColorJitterConfig = field(default_factory=ColorJitterConfig)
    blur: BlurConfig = field(default_factory=BlurConfig)
    rotation: float = 10.0
    seed: int = 0

    def __post_init__(self):
        if self.target_size <= 0:
            raise ValueError("target_size must be positive")
        if not 0.0 <= self.flip_probability <= 1.0:
            raise ValueError("flip_probability must be in [0, 1]")
        j = self.jitter
        if min(j.brightness, j.contrast, j.saturation, j.hue) < 0 or j.hue > MAX_HUE_FACTOR:
            raise ValueError("jitter factors must be >= 0 and hue <= %s" % MAX_HUE_FACTOR)
        if self.blur.radius < 0 or (self.blur.radius > 0 and not 0 < self.blur.sigma_min <= self.blur.sigma_max):
            raise ValueError("blur needs radius >= 0 and 0 < sigma_min <= sigma_max")
        if self.rotation < 0:
            raise ValueError("rotation must be >= 0")


class Pipeline:
    """Composed preprocessing; owns its random stream, so one instance per worker."""

    def __init__(self, cfg: AugmentationConfig, mode: str):
        if mode not in (TRAIN_MODE, EVAL_MODE):
            raise ValueError("Unknown pipeline mode '%s'" % mode)
        self._logger = logging.getLogger(__name__)
        self._cfg = cfg
        self._mode = mode
        self._rng = torch.Generator()
        self.reseed(cfg.seed)
        self._logger.debug("%s pipeline: %s", mode, cfg)

    @property
    def mode(self) -> str:
        return self._mode

    def reseed(self, seed: int):
        self._rng.manual_seed(seed)

    def __call__(self, img: torch.Tensor) -> torch.Tensor:
        cfg = self._cfg
        img = resize(check_pixel_tensor(img), cfg.target_size)
        if self._mode == TRAIN_MODE:
            img = horizontal_flip(img, cfg.flip_probability, self._rng)
            img = color_jitter(img, cfg.jitter, self._rng)
            img = random_gaussian_blur(img, cfg.blur, self._rng)
            img = random_rotation(img, cfg.rotation, self._rng)
        return TF.normalize(img, IMAGENET_MEAN, IMAGENET_STD)


def build_pipeline(cfg: AugmentationConfig, mode: str) -> Pipeline:
    return Pipeline(cfg, mode)
