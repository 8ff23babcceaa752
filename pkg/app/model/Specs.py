#!/usr/bin/env python3
from dataclasses import dataclass, asdict

VGG16_BN = "vgg16_bn"
WIDE_RESNET50 = "wide_resnet50"
BACKBONES = (VGG16_BN, WIDE_RESNET50)
PRETRAINED_OUTPUT_DIM = 1000


@dataclass(frozen=True)
class BackboneSpec:
    name: str = WIDE_RESNET50
    pretrained: bool = True
    output_dim: int = PRETRAINED_OUTPUT_DIM

    def __post_init__(self):
        if self.name not in BACKBONES:
            raise ValueError("Unknown backbone '%s' (expected one of %s)" % (self.name, ", ".join(BACKBONES)))
        if self.output_dim <= 0:
            raise ValueError("Backbone output_dim must be positive")
        if self.pretrained and self.output_dim != PRETRAINED_OUTPUT_DIM:
            raise ValueError("Pretrained backbones output %d classes" % PRETRAINED_OUTPUT_DIM)

    def to_dict(self) -> dict:
        return asdict(self)

    @staticmethod
    def from_dict(data: dict) -> "BackboneSpec":
        return BackboneSpec(str(data["name"]), bool(data["pretrained"]), int(data["output_dim"]))


@dataclass(frozen=True)
class HeadSpec:
    hidden_dim: int = 256
    dropout_p: float = 0.5
    num_classes: int = 268

    def __post_init__(self):
        if self.hidden_dim <= 0:
            raise ValueError("Head hidden_dim must be positive")
        if not 0.0 <= self.dropout_p < 1.0:
            raise ValueError("Head dropout_p must be in [0, 1)")
        if self.num_classes < 2:
            raise ValueError("A classifier needs at least 2 classes")

    def to_dict(self) -> dict:
        return asdict(self)

    @staticmethod
    def from_dict(data: dict) -> "HeadSpec":
        return HeadSpec(int(data["hidden_dim"]), float(data["dropout_p"]), int(data["num_classes"]))
