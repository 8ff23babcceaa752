#!/usr/bin/env python3
import numpy as np
import torch
from torchvision.transforms import functional as TF

CHANNELS = 3


def to_tensor(rgb: np.ndarray) -> torch.Tensor:
    """HxWx3 uint8 array to a 3xHxW float tensor in [0, 1]."""
    return TF.to_tensor(np.ascontiguousarray(rgb, dtype=np.uint8))


def to_rgb(img: torch.Tensor) -> np.ndarray:
    """3xHxW float tensor in [0, 1] to a HxWx3 uint8 array."""
    return (img.detach().clamp(0.0, 1.0) * 255.0).round().to(torch.uint8).permute(1, 2, 0).cpu().numpy()


def check_pixel_tensor(img: torch.Tensor) -> torch.Tensor:
    if img.ndim != 3 or img.shape[0] != CHANNELS or img.shape[1] <= 0 or img.shape[2] <= 0:
        raise ValueError("Expected a 3xHxW image tensor, got shape %s" % (tuple(img.shape),))
    if not torch.isfinite(img).all():
        raise ValueError("Image tensor contains non finite values")
    return img
