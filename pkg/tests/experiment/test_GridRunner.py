import os
import tempfile
import unittest
from unittest.mock import patch

import pandas as pd
import torch

from app.Errors import DataError
from app.augment.Pipeline import AugmentationConfig
from app.compression.CorpusCompressor import CompressionConfig, CorpusCompressor
from app.dataset.DatasetManifest import load_manifest
from app.dataset.Split import SplitConfig
from app.experiment.ExperimentGrid import ExperimentGrid
from app.experiment.GridRunner import (GridRunner, run_grid, cell_dir_name, MANIFEST_FILE, RATE_DISTORTION_FILE,
                                       RESULTS_FILE, CROSS_QUALITY_FILE, CROSS_QUALITY_COLUMNS)
from app.experiment.ResultsTable import read_results_csv
from app.model.Specs import BackboneSpec, HeadSpec, VGG16_BN, WIDE_RESNET50
from app.training.Trainer import BEST_CHECKPOINT
from app.training.TrainingResult import TrainingConfig
from tests.fixtures import make_corpus, tiny_factory

CPU = torch.device("cpu")
WIDE = BackboneSpec(WIDE_RESNET50, pretrained=False, output_dim=16)
VGG = BackboneSpec(VGG16_BN, pretrained=False, output_dim=16)


def failing_vgg_factory(backbone, head, freeze_backbone=False):
    if backbone.name == VGG16_BN:
        raise RuntimeError("CUDA out of memory")
    return tiny_factory(backbone, head, freeze_backbone)


class TestGridRunner(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.corpus = make_corpus(os.path.join(self.tmp.name, "corpus"), classes=3, per_class=5, size=32)
        self.run_dir = os.path.join(self.tmp.name, "run")

    def tearDown(self):
        self.tmp.cleanup()

    def grid(self, backbones=(WIDE,), qualities=(100, 50), **kwargs) -> ExperimentGrid:
        return ExperimentGrid(
            backbones=backbones,
            corpus_root=self.corpus,
            qualities=qualities,
            split=SplitConfig(0.6, seed=3),
            augmentation=AugmentationConfig(target_size=32),
            training=TrainingConfig(max_epochs=2, early_stopping_patience=1, batch_size=4, learning_rate=1e-2),
            compression=CompressionConfig(qualities=qualities, workers=1),
            head=HeadSpec(8, 0.5),
            runs_root=os.path.join(self.tmp.name, "runs"),
            **kwargs)

    def test_grid_validation(self):
        self.assertEqual(self.grid(backbones=(WIDE, VGG), qualities=(100, 50, 25)).cell_count, 6)
        with self.assertRaises(ValueError):
            self.grid(backbones=())
        with self.assertRaises(ValueError):
            self.grid(qualities=(50, 50))
        with self.assertRaises(ValueError):
            self.grid(backbones=(WIDE, WIDE))
        with self.assertRaises(ValueError):
            self.grid(qualities=(0,))

    def test_cell_dir_name(self):
        self.assertEqual(cell_dir_name("wide_resnet50", 25), "wide_resnet50_q25")
        self.assertEqual(cell_dir_name("VGG16 BN", 100), "vgg16_bn_q100")

    def test_run(self):
        result = GridRunner(self.grid(), self.run_dir, model_factory=tiny_factory, device=CPU).run()

        self.assertEqual(len(result.cells), 2)
        self.assertEqual(result.failures(), [])
        self.assertEqual(len(result.fingerprints()), 1)
        for q in (100, 50):
            cell = result.cell(WIDE_RESNET50, q)
            self.assertEqual(cell.compression.quality, q)
            self.assertTrue(os.path.isfile(os.path.join(self.run_dir, cell_dir_name(WIDE_RESNET50, q),
                                                        BEST_CHECKPOINT)))
        self.assertTrue(result.cell(WIDE_RESNET50, 100).compression.lossless)

        manifest = load_manifest(os.path.join(self.run_dir, MANIFEST_FILE))
        self.assertEqual(manifest.split.fingerprint(), result.fingerprints().pop())
        rate_distortion = pd.read_csv(os.path.join(self.run_dir, RATE_DISTORTION_FILE))
        self.assertEqual(rate_distortion["quality"].tolist(), [100, 50])

        frame = read_results_csv(os.path.join(self.run_dir, RESULTS_FILE))
        self.assertEqual(frame["quality"].tolist(), [100, 50])
        self.assertEqual(frame["final_acc"].tolist(),
                         [result.cell(WIDE_RESNET50, q).training.final_accuracy for q in (100, 50)])
        with open(os.path.join(self.run_dir, "wide_resnet50_table.txt"), 'r') as fp:
            text = fp.read()
        self.assertIn("Normal run", text)
        self.assertIn("JPEG compression", text)
        self.assertFalse(os.path.exists(os.path.join(self.run_dir, CROSS_QUALITY_FILE)))

    @patch("app.experiment.GridRunner.build_model", side_effect=tiny_factory)
    def test_run_grid(self, mock_build):
        result = run_grid(self.grid(qualities=(50,)), self.run_dir)
        mock_build.assert_called_once()
        self.assertEqual(result.run_dir, self.run_dir)
        self.assertFalse(result.cell(WIDE_RESNET50, 50).failed)

    def test_reuses_manifest_split(self):
        first = GridRunner(self.grid(qualities=(100,)), self.run_dir, model_factory=tiny_factory, device=CPU).run()
        manifest = load_manifest(os.path.join(self.run_dir, MANIFEST_FILE))
        grid = self.grid(qualities=(100,))
        second = GridRunner(grid, os.path.join(self.tmp.name, "run2"), manifest, tiny_factory, CPU).run()
        self.assertEqual(first.fingerprints(), second.fingerprints())

    def test_failing_cells(self):
        grid = self.grid(backbones=(WIDE, VGG), qualities=(100, 50, 25))
        result = GridRunner(grid, self.run_dir, model_factory=failing_vgg_factory, device=CPU).run()

        self.assertEqual(len(result.cells), 6)
        failures = result.failures()
        self.assertEqual(sorted(c.quality for c in failures), [25, 50, 100])
        self.assertTrue(all(c.backbone == VGG16_BN for c in failures))
        self.assertIn("CUDA out of memory", failures[0].error)
        self.assertEqual(len(result.fingerprints()), 1)

        frame = read_results_csv(os.path.join(self.run_dir, RESULTS_FILE))
        self.assertEqual(frame["backbone"].tolist(), [WIDE_RESNET50] * 3 + [VGG16_BN] * 3)
        self.assertEqual(frame["quality"].tolist(), [100, 50, 25] * 2)
        self.assertTrue(frame["final_acc"].iloc[3:].isna().all())
        self.assertFalse(frame["final_acc"].iloc[:3].isna().any())
        self.assertTrue(os.path.isfile(os.path.join(self.run_dir, "vgg16_bn_table.txt")))

    @patch.object(CorpusCompressor, "compress", side_effect=DataError("disk full"))
    def test_compression_failure(self, _):
        result = GridRunner(self.grid(), self.run_dir, model_factory=tiny_factory, device=CPU).run()
        self.assertEqual(len(result.failures()), 2)
        self.assertTrue(all("disk full" in c.error for c in result.failures()))
        self.assertFalse(os.path.exists(os.path.join(self.run_dir, RATE_DISTORTION_FILE)))
        self.assertTrue(os.path.isfile(os.path.join(self.run_dir, RESULTS_FILE)))

    def test_cross_quality(self):
        result = GridRunner(self.grid(cross_quality=True), self.run_dir, model_factory=tiny_factory,
                            device=CPU).run()
        cell = result.cell(WIDE_RESNET50, 50)
        self.assertEqual(sorted(cell.cross_quality), [50, 100])
        self.assertEqual(cell.cross_quality[50], cell.training.final_accuracy)
        frame = pd.read_csv(os.path.join(self.run_dir, CROSS_QUALITY_FILE))
        self.assertEqual(list(frame.columns), CROSS_QUALITY_COLUMNS)
        self.assertEqual(len(frame), 4)


if __name__ == '__main__':
    unittest.main()
