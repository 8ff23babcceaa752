#!/usr/bin/env python3
import logging

import torch
from torch import nn
from torchvision import models

from .Specs import BackboneSpec, HeadSpec, VGG16_BN, WIDE_RESNET50

_logger = logging.getLogger(__name__)


class ClassifierModel(nn.Module):
    """
    Pretrained backbone followed by the identification head:
    linear(n -> hidden) -> ReLU -> dropout -> linear(hidden -> classes).

    The head consumes the backbone's own n-way output rather than replacing
    its last layer.
    """

    def __init__(self, backbone: nn.Module, backbone_spec: BackboneSpec, head_spec: HeadSpec):
        super().__init__()
        self.backbone_spec = backbone_spec
        self.head_spec = head_spec
        self.backbone = backbone
        self.head = nn.Sequential(
            nn.Linear(backbone_spec.output_dim, head_spec.hidden_dim),
            nn.ReLU(),
            nn.Dropout(head_spec.dropout_p),
            nn.Linear(head_spec.hidden_dim, head_spec.num_classes),
        )

    def forward(self, batch: torch.Tensor) -> torch.Tensor:
        return self.head(self.backbone(batch))


def _build_backbone(spec: BackboneSpec) -> nn.Module:
    if spec.name == VGG16_BN:
        weights = models.VGG16_BN_Weights.IMAGENET1K_V1 if spec.pretrained else None
        return models.vgg16_bn(weights=weights, num_classes=spec.output_dim)
    if spec.name == WIDE_RESNET50:
        weights = models.Wide_ResNet50_2_Weights.IMAGENET1K_V1 if spec.pretrained else None
        return models.wide_resnet50_2(weights=weights, num_classes=spec.output_dim)
    raise ValueError("Unknown backbone '%s'" % spec.name)


def build_model(backbone_spec: BackboneSpec, head_spec: HeadSpec, freeze_backbone: bool = False) -> ClassifierModel:
    _logger.info("Building %s (pretrained: %s) with head %d -> %d -> %d", backbone_spec.name,
                 backbone_spec.pretrained, backbone_spec.output_dim, head_spec.hidden_dim, head_spec.num_classes)
    model = ClassifierModel(_build_backbone(backbone_spec), backbone_spec, head_spec)
    if freeze_backbone:
        for param in model.backbone.parameters():
            param.requires_grad = False
    return model


def head_parameter_count(model: ClassifierModel) -> int:
    return sum(p.numel() for p in model.head.parameters())


def _check_batch(batch: torch.Tensor):
    if batch.ndim != 4 or batch.shape[1] != 3:
        raise ValueError("Expected a Bx3xHxW batch, got shape %s" % (tuple(batch.shape),))


def forward_logits(model: ClassifierModel, batch: torch.Tensor) -> torch.Tensor:
    _check_batch(batch)
    return model(batch)


def forward_probabilities(model: ClassifierModel, batch: torch.Tensor) -> torch.Tensor:
    return torch.softmax(forward_logits(model, batch), dim=1)


def select_device() -> torch.device:
    if torch.cuda.is_available():
        device = torch.device("cuda")
        _logger.info("CUDA is available, using %s", torch.cuda.get_device_name(device))
    else:
        device = torch.device("cpu")
        _logger.info("CUDA is not available, using CPU")
    return device
