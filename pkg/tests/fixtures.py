import os

import numpy as np
from PIL import Image
from torch import nn

from app.dataset.DatasetManifest import DatasetManifest
from app.dataset.ImageRecord import ImageRecord
from app.model.ClassifierModel import ClassifierModel
from app.model.Specs import BackboneSpec, HeadSpec, WIDE_RESNET50

TINY_OUTPUT_DIM = 16


def textured_image(class_index: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Stripes whose frequency and orientation depend on the class, plus a little noise."""
    y, x = np.mgrid[0:size, 0:size].astype(np.float64)
    frequency = 1.0 + class_index % 4
    angle = np.pi * (class_index // 4) / 3.0
    wave = np.sin(2 * np.pi * frequency * (x * np.cos(angle) + y * np.sin(angle)) / size)
    base = 127.5 + 100.0 * wave
    tint = np.array([1.0, 0.6 + 0.1 * (class_index % 4), 0.6])
    img = base[:, :, None] * tint[None, None, :] + rng.normal(0.0, 6.0, (size, size, 3))
    return np.clip(img, 0, 255).astype(np.uint8)


def write_rgb(rgb: np.ndarray, path: str, **save_args):
    Image.fromarray(np.ascontiguousarray(rgb, dtype=np.uint8)).save(path, **save_args)


def make_corpus(root: str, classes: int = 3, per_class: int = 4, size: int = 32, seed: int = 0,
                extension: str = ".png") -> str:
    rng = np.random.default_rng(seed)
    for c in range(classes):
        class_dir = os.path.join(root, "cow%02d" % c)
        os.makedirs(class_dir, exist_ok=True)
        for i in range(per_class):
            Image.fromarray(textured_image(c, size, rng)).save(os.path.join(class_dir, "img%02d%s" % (i, extension)))
    return root


def synthetic_manifest(counts: list[int]) -> DatasetManifest:
    """Manifest of records with no files behind them, for split properties."""
    classes = tuple("c%03d" % i for i in range(len(counts)))
    records = tuple(ImageRecord("/corpus/%s/%04d.jpg" % (c, i), c, 300, 300, 1000 + i)
                    for c, n in zip(classes, counts) for i in range(n))
    return DatasetManifest(records, classes)


def tiny_backbone(output_dim: int = TINY_OUTPUT_DIM) -> nn.Module:
    return nn.Sequential(
        nn.Conv2d(3, 8, kernel_size=3, stride=2, padding=1),
        nn.ReLU(),
        nn.AdaptiveAvgPool2d(1),
        nn.Flatten(),
        nn.Linear(8, output_dim),
    )


def tiny_model(num_classes: int, output_dim: int = TINY_OUTPUT_DIM, hidden_dim: int = 8) -> ClassifierModel:
    spec = BackboneSpec(WIDE_RESNET50, pretrained=False, output_dim=output_dim)
    return ClassifierModel(tiny_backbone(output_dim), spec, HeadSpec(hidden_dim, 0.5, num_classes))


def tiny_factory(backbone: BackboneSpec, head: HeadSpec, freeze_backbone: bool = False) -> ClassifierModel:
    return ClassifierModel(tiny_backbone(backbone.output_dim), backbone, head)
