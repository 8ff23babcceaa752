#!/usr/bin/env python3
import logging
import os
import time
from dataclasses import replace
from typing import Callable, Optional

import pandas as pd
import torch

from ..compression.CorpusCompressor import CorpusCompressor
from ..compression.RateDistortion import rate_distortion_report
from ..dataset.CorpusScanner import scan_corpus
from ..dataset.DatasetManifest import DatasetManifest, save_manifest
from ..dataset.Split import SplitAssignment, stratified_split
from ..model.ClassifierModel import build_model, ClassifierModel
from ..model.Specs import BackboneSpec, HeadSpec
from ..training.Trainer import Trainer, evaluate_accuracy
from ..utils.Utils import normalize_string
from .ExperimentGrid import ExperimentGrid, GridResult, CellResult
from .ResultsTable import emit_results_table, write_results_csv

MANIFEST_FILE = "manifest.json"
RATE_DISTORTION_FILE = "rate_distortion.csv"
RESULTS_FILE = "results.csv"
CROSS_QUALITY_FILE = "cross_quality.csv"
CROSS_QUALITY_COLUMNS = ["backbone", "train_quality", "eval_quality", "accuracy"]

ModelFactory = Callable[[BackboneSpec, HeadSpec, bool], ClassifierModel]


def cell_dir_name(backbone: str, quality: int) -> str:
    return "%s_q%d" % (normalize_string(backbone, "_"), quality)


class GridRunner:
    """
    Runs every (backbone, quality) cell of a grid against a single split of the corpus.

    The corpus is compressed once per quality and shared by all backbones. A failing
    cell is recorded with its error and the remaining cells still run.
    """

    def __init__(self, grid: ExperimentGrid, run_dir: Optional[str] = None,
                 manifest: Optional[DatasetManifest] = None,
                 model_factory: Optional[ModelFactory] = None,
                 device: Optional[torch.device] = None):
        self._logger = logging.getLogger(__name__)
        self._grid = grid
        self._run_dir = run_dir or os.path.join(grid.runs_root, time.strftime("%Y%m%d-%H%M%S"))
        self._manifest = manifest
        self._model_factory = model_factory or build_model
        self._device = device
        self._compressed = {}

    @property
    def run_dir(self) -> str:
        return self._run_dir

    def _prepare(self) -> tuple[DatasetManifest, SplitAssignment]:
        manifest = self._manifest or scan_corpus(self._grid.corpus_root, self._grid.compression.workers)
        if manifest.split is not None:
            split = manifest.split
        else:
            split = stratified_split(manifest, self._grid.split)
            manifest = manifest.with_split(split, self._grid.split.seed, self._grid.split.train_fraction)
        save_manifest(manifest, os.path.join(self._run_dir, MANIFEST_FILE))
        return manifest, split

    def _compress_all(self, manifest: DatasetManifest, split: SplitAssignment) -> dict:
        errors = {}
        for q in self._grid.qualities:
            out_root = os.path.join(self._run_dir, "compressed", "q%d" % q)
            try:
                compressor = CorpusCompressor(manifest, out_root, self._grid.compression)
                report = compressor.compress(q)
                self._compressed[q] = (report, split.remap(compressor.path_map))
            except Exception as e:
                self._logger.error("Compression at q=%d failed: %s", q, e)
                errors[q] = "compression failed: %s" % e
        reports = [report for report, _ in self._compressed.values()]
        if reports:
            rate_distortion_report(reports).to_csv(os.path.join(self._run_dir, RATE_DISTORTION_FILE))
        return errors

    def _run_cell(self, backbone: BackboneSpec, q: int, classes: list[str], cell: CellResult):
        report, split = self._compressed[q]
        cell.compression = report
        head = replace(self._grid.head, num_classes=len(classes))
        training = self._grid.training
        torch.manual_seed(training.seed)
        model = self._model_factory(backbone, head, training.freeze_backbone)
        out_dir = os.path.join(self._run_dir, cell_dir_name(backbone.name, q))
        trainer = Trainer(model, split, classes, self._grid.augmentation, training, out_dir, self._device)
        cell.training = trainer.train()

        if self._grid.cross_quality:
            class_index = {c: i for i, c in enumerate(classes)}
            for other_q, (_, other_split) in self._compressed.items():
                if other_q == q:
                    cell.cross_quality[other_q] = cell.training.final_accuracy
                    continue
                cell.cross_quality[other_q] = evaluate_accuracy(model, list(other_split.test),
                                                                self._grid.augmentation, class_index,
                                                                training.batch_size, self._device)
                self._logger.info("%s trained at q=%d scores %.4f on q=%d", backbone.name, q,
                                  cell.cross_quality[other_q], other_q)

    def run(self) -> GridResult:
        grid = self._grid
        os.makedirs(self._run_dir, exist_ok=True)
        self._logger.info("Starting grid of %d cells in %s", grid.cell_count, self._run_dir)
        manifest, split = self._prepare()
        fingerprint = split.fingerprint()
        compression_errors = self._compress_all(manifest, split)

        result = GridResult(self._run_dir)
        for backbone in grid.backbones:
            for q in grid.qualities:
                cell = CellResult(backbone.name, int(q), fingerprint)
                result.cells[(backbone.name, int(q))] = cell
                if q in compression_errors:
                    cell.error = compression_errors[q]
                    continue
                self._logger.info("Cell %s at q=%d", backbone.name, q)
                try:
                    self._run_cell(backbone, q, list(manifest.classes), cell)
                except Exception as e:
                    self._logger.error("Cell %s at q=%d failed: %s", backbone.name, q, e)
                    cell.error = "%s: %s" % (type(e).__name__, e)

        self._write_reports(result)
        failures = result.failures()
        if failures:
            self._logger.error("%d of %d cells failed: %s", len(failures), len(result.cells),
                               ", ".join("%s q=%d" % (c.backbone, c.quality) for c in failures))
        else:
            self._logger.info("All %d cells completed", len(result.cells))
        return result

    def _write_reports(self, result: GridResult):
        write_results_csv(result, os.path.join(self._run_dir, RESULTS_FILE))
        for backbone in result.backbones():
            table = emit_results_table(result, backbone)
            with open(os.path.join(self._run_dir, "%s_table.txt" % normalize_string(backbone, "_")), 'w') as fp:
                fp.write(table.text + "\n")
            self._logger.info("Results for %s:\n%s", backbone, table.text)
        if self._grid.cross_quality:
            rows = [[c.backbone, c.quality, eval_q, acc]
                    for c in result.cells.values() for eval_q, acc in sorted(c.cross_quality.items())]
            pd.DataFrame(rows, columns=CROSS_QUALITY_COLUMNS).to_csv(
                os.path.join(self._run_dir, CROSS_QUALITY_FILE), index=False)


def run_grid(grid: ExperimentGrid, run_dir: Optional[str] = None,
             manifest: Optional[DatasetManifest] = None) -> GridResult:
    return GridRunner(grid, run_dir, manifest).run()
