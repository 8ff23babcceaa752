import os
import tempfile
import unittest
from unittest.mock import patch

import torch

from app.Errors import CheckpointError, SpecMismatchError
from app.model.Checkpoint import save_checkpoint, load_checkpoint, read_checkpoint, restore_model
from tests.fixtures import tiny_model, tiny_factory


class TestCheckpoint(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.tmp.name, "best.pt")
        torch.manual_seed(0)
        self.model = tiny_model(num_classes=4).eval()
        self.inputs = torch.randn(3, 3, 32, 32)

    def tearDown(self):
        self.tmp.cleanup()

    def test_round_trip(self):
        save_checkpoint(self.model, self.path, ["a", "b", "c", "d"], {"seed": 0})
        torch.manual_seed(99)
        other = tiny_model(num_classes=4).eval()
        payload = load_checkpoint(other, self.path)
        self.assertEqual(payload["classes"], ["a", "b", "c", "d"])
        self.assertEqual(payload["training_config"], {"seed": 0})
        with torch.no_grad():
            self.assertTrue(torch.allclose(self.model(self.inputs), other(self.inputs), atol=1e-6))

    def test_spec_mismatch(self):
        save_checkpoint(self.model, self.path)
        with self.assertRaises(SpecMismatchError) as ctx:
            load_checkpoint(tiny_model(num_classes=12), self.path)
        message = str(ctx.exception)
        self.assertIn("num_classes=4", message)
        self.assertIn("num_classes=12", message)

    def test_corrupted_file(self):
        save_checkpoint(self.model, self.path)
        with open(self.path, 'rb') as fp:
            content = fp.read()
        with open(self.path, 'wb') as fp:
            fp.write(content[:len(content) // 2])
        with self.assertRaises(CheckpointError):
            read_checkpoint(self.path)

    def test_tampered_weights(self):
        save_checkpoint(self.model, self.path)
        payload = torch.load(self.path, weights_only=True)
        payload["state_dict"]["head.3.bias"] += 1.0
        torch.save(payload, self.path)
        with self.assertRaises(CheckpointError) as ctx:
            read_checkpoint(self.path)
        self.assertIn("integrity", str(ctx.exception))

    def test_not_a_checkpoint(self):
        torch.save({"weights": torch.zeros(3)}, self.path)
        with self.assertRaises(CheckpointError):
            read_checkpoint(self.path)
        with self.assertRaises(CheckpointError):
            read_checkpoint(os.path.join(self.tmp.name, "missing.pt"))

    def test_restore_model(self):
        save_checkpoint(self.model, self.path, ["a", "b", "c", "d"])
        with patch("app.model.Checkpoint.build_model", side_effect=tiny_factory):
            model, payload = restore_model(self.path)
        self.assertFalse(model.training)
        self.assertFalse(payload["backbone"].pretrained)
        with torch.no_grad():
            self.assertTrue(torch.allclose(self.model(self.inputs), model(self.inputs), atol=1e-6))


if __name__ == '__main__':
    unittest.main()
