import unittest
from unittest.mock import patch

import torch

from app.model.ClassifierModel import (build_model, head_parameter_count, forward_logits, forward_probabilities,
                                       select_device)
from app.model.Specs import BackboneSpec, HeadSpec, VGG16_BN, WIDE_RESNET50
from tests.fixtures import tiny_backbone, tiny_model


class TestClassifierModel(unittest.TestCase):

    def setUp(self):
        torch.manual_seed(0)
        self.model = tiny_model(num_classes=5).eval()
        self.batch = torch.randn(4, 3, 32, 32)

    @patch("app.model.ClassifierModel._build_backbone")
    def test_default_head(self, mock_backbone):
        mock_backbone.return_value = tiny_backbone(1000)
        model = build_model(BackboneSpec(), HeadSpec())
        self.assertEqual(head_parameter_count(model), 325_132)
        self.assertEqual(model.head[0].in_features, 1000)
        self.assertEqual(model.head[0].out_features, 256)
        self.assertEqual(model.head[3].out_features, 268)
        self.assertEqual(model.head[2].p, 0.5)

    @patch("app.model.ClassifierModel._build_backbone")
    def test_toy_head(self, mock_backbone):
        mock_backbone.return_value = tiny_backbone(1000)
        model = build_model(BackboneSpec(pretrained=False), HeadSpec(num_classes=2))
        self.assertEqual(head_parameter_count(model), 1000 * 256 + 256 + 256 * 2 + 2)

    @patch("app.model.ClassifierModel.models")
    def test_pretrained_backbones(self, mock_models):
        build_model(BackboneSpec(VGG16_BN), HeadSpec(num_classes=3))
        mock_models.vgg16_bn.assert_called_once_with(weights=mock_models.VGG16_BN_Weights.IMAGENET1K_V1,
                                                     num_classes=1000)
        build_model(BackboneSpec(WIDE_RESNET50, pretrained=False), HeadSpec(num_classes=3))
        mock_models.wide_resnet50_2.assert_called_once_with(weights=None, num_classes=1000)

    @patch("app.model.ClassifierModel._build_backbone")
    def test_freeze_backbone(self, mock_backbone):
        mock_backbone.return_value = tiny_backbone(1000)
        model = build_model(BackboneSpec(pretrained=False), HeadSpec(num_classes=3), freeze_backbone=True)
        self.assertFalse(any(p.requires_grad for p in model.backbone.parameters()))
        self.assertTrue(all(p.requires_grad for p in model.head.parameters()))

    def test_invalid_specs(self):
        with self.assertRaises(ValueError):
            BackboneSpec("resnet18")
        with self.assertRaises(ValueError):
            BackboneSpec(pretrained=True, output_dim=10)
        with self.assertRaises(ValueError):
            HeadSpec(num_classes=1)
        with self.assertRaises(ValueError):
            HeadSpec(dropout_p=1.0)

    def test_logits_shape(self):
        logits = forward_logits(self.model, self.batch)
        self.assertEqual(tuple(logits.shape), (4, 5))
        self.assertTrue(torch.isfinite(logits).all())
        with self.assertRaises(ValueError):
            forward_logits(self.model, torch.randn(3, 32, 32))
        with self.assertRaises(ValueError):
            forward_logits(self.model, torch.randn(2, 1, 32, 32))

    def test_eval_is_deterministic(self):
        self.assertTrue(torch.equal(forward_logits(self.model, self.batch), forward_logits(self.model, self.batch)))
        duplicated = self.batch[:1].repeat(2, 1, 1, 1)
        logits = forward_logits(self.model, duplicated)
        self.assertTrue(torch.allclose(logits[0], logits[1]))

    def test_probabilities(self):
        probabilities = forward_probabilities(self.model, self.batch)
        self.assertTrue((probabilities >= 0).all())
        self.assertTrue(torch.allclose(probabilities.sum(dim=1), torch.ones(4), atol=1e-5))
        logits = forward_logits(self.model, self.batch)
        self.assertTrue(torch.equal(probabilities.argmax(dim=1), logits.argmax(dim=1)))
        self.assertTrue(torch.allclose(probabilities, torch.softmax(logits, dim=1)))

    def test_uniform_logits(self):
        with torch.no_grad():
            last = self.model.head[3]
            last.weight.zero_()
            last.bias.fill_(0.3)
        probabilities = forward_probabilities(self.model, self.batch)
        self.assertTrue(torch.allclose(probabilities, torch.full((4, 5), 0.2)))

    @patch("app.model.ClassifierModel.torch.cuda.is_available", return_value=False)
    def test_select_device(self, _):
        self.assertEqual(select_device(), torch.device("cpu"))


if __name__ == '__main__':
    unittest.main()
