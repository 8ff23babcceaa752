#!/usr/bin/env python3
"""
Image transforms on 3xHxW float tensors in [0, 1].

Each random transform draws its parameters from a torch.Generator and
delegates to an explicit-parameter variant.
"""
import math

import torch
import torch.nn.functional as F
from torchvision.transforms import InterpolationMode
from torchvision.transforms import functional as TF

MAX_HUE_FACTOR = 0.5


def _uniform(rng: torch.Generator, low: float, high: float) -> float:
    return low + (high - low) * torch.rand(1, generator=rng).item()


def resize(img: torch.Tensor, size: int) -> torch.Tensor:
    """Bilinear resize to size x size; aspect ratio is not preserved."""
    if size <= 0:
        raise ValueError("Resize size must be positive, got %s" % size)
    if tuple(img.shape[-2:]) == (size, size):
        return img
    return TF.resize(img, [size, size], interpolation=InterpolationMode.BILINEAR, antialias=False)


def flip(img: torch.Tensor) -> torch.Tensor:
    return TF.hflip(img)


def horizontal_flip(img: torch.Tensor, probability: float, rng: torch.Generator) -> torch.Tensor:
    if not 0.0 <= probability <= 1.0:
        raise ValueError("Flip probability must be in [0, 1], got %s" % probability)
    if torch.rand(1, generator=rng).item() < probability:
        return flip(img)
    return img


def adjust_color(img: torch.Tensor, brightness: float = 1.0, contrast: float = 1.0,
                 saturation: float = 1.0, hue: float = 0.0) -> torch.Tensor:
    """Brightness, contrast and saturation scale factors then a hue shift; neutral values are skipped."""
    if brightness != 1.0:
        img = TF.adjust_brightness(img, brightness)
    if contrast != 1.0:
        img = TF.adjust_contrast(img, contrast)
    if saturation != 1.0:
        img = TF.adjust_saturation(img, saturation)
    if hue != 0.0:
        img = TF.adjust_hue(img, hue)
    return img.clamp(0.0, 1.0)


def color_jitter(img: torch.Tensor, jitter, rng: torch.Generator) -> torch.Tensor:
    for name in ("brightness", "contrast", "saturation", "hue"):
        if getattr(jitter, name) < 0:
            raise ValueError("Jitter factor %s must be >= 0" % name)
    if jitter.hue > MAX_HUE_FACTOR:
        raise ValueError("Hue jitter factor must be <= %s, got %s" % (MAX_HUE_FACTOR, jitter.hue))
    factors = [_uniform(rng, max(0.0, 1.0 - f), 1.0 + f)
               for f in (jitter.brightness, jitter.contrast, jitter.saturation)]
    hue = _uniform(rng, -jitter.hue, jitter.hue)
    return adjust_color(img, *factors, hue=hue)


def gaussian_blur(img: torch.Tensor, radius: int, sigma: float) -> torch.Tensor:
    """Separable normalized Gaussian kernel of size 2*radius+1, reflected borders."""
    if radius < 1 or sigma <= 0:
        raise ValueError("Blur needs radius >= 1 and sigma > 0, got %s / %s" % (radius, sigma))
    size = 2 * radius + 1
    return TF.gaussian_blur(img, kernel_size=[size, size], sigma=[sigma, sigma])


def random_gaussian_blur(img: torch.Tensor, blur, rng: torch.Generator) -> torch.Tensor:
    if blur.radius == 0:
        return img
    return gaussian_blur(img, blur.radius, _uniform(rng, blur.sigma_min, blur.sigma_max))


def rotate(img: torch.Tensor, degrees: float) -> torch.Tensor:
    """Counter-clockwise rotation about the center, bilinear, edge pixels replicated out of frame."""
    if degrees == 0:
        return img
    _, h, w = img.shape
    a = math.radians(degrees)
    theta = torch.tensor([[math.cos(a), -math.sin(a) * h / w, 0.0],
                          [math.sin(a) * w / h, math.cos(a), 0.0]], dtype=img.dtype).unsqueeze(0)
    grid = F.affine_grid(theta, [1, 3, h, w], align_corners=False)
    return F.grid_sample(img.unsqueeze(0), grid, mode="bilinear", padding_mode="border",
                         align_corners=False).squeeze(0)


def random_rotation(img: torch.Tensor, max_degrees: float, rng: torch.Generator) -> torch.Tensor:
    if max_degrees < 0:
        raise ValueError("Rotation range must be >= 0, got %s" % max_degrees)
    if max_degrees == 0:
        return img
    return rotate(img, _uniform(rng, -max_degrees, max_degrees))
