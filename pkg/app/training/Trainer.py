#!/usr/bin/env python3
import logging
import os
import platform
import time
from typing import Optional

import torch
from torch import nn
from torch.utils.data import DataLoader, Dataset, get_worker_info

from ..Errors import DataError, LeakageError
from ..augment.Pipeline import AugmentationConfig, build_pipeline, Pipeline, TRAIN_MODE, EVAL_MODE
from ..dataset.ImageRecord import ImageRecord
from ..dataset.Split import SplitAssignment
from ..model.Checkpoint import save_checkpoint, load_checkpoint
from ..model.ClassifierModel import ClassifierModel, forward_logits, select_device
from ..utils.ImageIO import load_image
from ..utils.Utils import format_duration
from .EarlyStopping import should_stop
from .TrainingResult import TrainingConfig, TrainingResult, EpochMetrics

BEST_CHECKPOINT = "best.pt"
METRICS_FILE = "metrics.csv"
RESULT_FILE = "result.json"


class ImageDataset(Dataset):
    def __init__(self, records: list[ImageRecord], class_index: dict[str, int], pipeline: Pipeline):
        self.records = list(records)
        self.class_index = class_index
        self.pipeline = pipeline

    def __len__(self):
        return len(self.records)

    def __getitem__(self, i):
        record = self.records[i]
        return self.pipeline(load_image(record.path)), self.class_index[record.class_id]


def _reseed_worker(worker_id: int):
    # every worker owns a copy of the pipeline, give each its own stream
    info = get_worker_info()
    info.dataset.pipeline.reseed(info.seed % (2 ** 63))


def machine_descriptor() -> str:
    parts = [platform.platform(), platform.processor() or platform.machine(), "torch %s" % torch.__version__]
    if torch.cuda.is_available():
        parts.append(torch.cuda.get_device_name(0))
    return " / ".join(p for p in parts if p)


def evaluate_accuracy(model: ClassifierModel, records: list[ImageRecord], aug: AugmentationConfig,
                      class_index: dict[str, int], batch_size: int = 32,
                      device: Optional[torch.device] = None) -> float:
    """Top-1 accuracy with the eval pipeline and the model in eval mode."""
    if not records:
        raise ValueError("Cannot evaluate on an empty record list")
    device = device or next(model.parameters()).device
    loader = DataLoader(ImageDataset(records, class_index, build_pipeline(aug, EVAL_MODE)),
                        batch_size=batch_size, shuffle=False)
    model.eval()
    correct = 0
    with torch.inference_mode():
        for batch, labels in loader:
            predictions = forward_logits(model, batch.to(device)).argmax(dim=1)
            correct += int((predictions.cpu() == labels).sum())
    return correct / len(records)


class Trainer:
    """Early-stopped fine-tuning; the best-accuracy weights are checkpointed and restored at the end."""

    def __init__(self, model: ClassifierModel, split: SplitAssignment, classes: list[str],
                 aug: AugmentationConfig, cfg: TrainingConfig, out_dir: str,
                 device: Optional[torch.device] = None):
        self._logger = logging.getLogger(__name__)
        self._model = model
        self._split = split
        self._classes = list(classes)
        self._aug = aug
        self._cfg = cfg
        self._out_dir = out_dir
        self._device = device
        self._class_index = {c: i for i, c in enumerate(self._classes)}

    def _check_inputs(self):
        if not self._split.train or not self._split.test:
            raise DataError("Both sides of the split must contain images")
        if len(self._classes) != self._model.head_spec.num_classes:
            raise DataError("Model outputs %d classes but the manifest has %d"
                            % (self._model.head_spec.num_classes, len(self._classes)))
        for side in ("train", "test"):
            unknown = self._split.classes(side) - set(self._classes)
            if unknown:
                raise DataError("Unknown classes in %s split: %s" % (side, ", ".join(sorted(unknown))))
            missing = set(self._classes) - self._split.classes(side)
            if missing:
                raise DataError("Classes missing from the %s split: %s" % (side, ", ".join(sorted(missing))))
        overlap = self._split.overlap()
        if overlap:
            raise LeakageError("%d evaluation image(s) found in the training stream, eg. %s"
                               % (len(overlap), sorted(overlap)[0]))

    def _optimizer(self) -> torch.optim.Optimizer:
        params = [p for p in self._model.parameters() if p.requires_grad]
        if self._cfg.optimizer == "sgd":
            return torch.optim.SGD(params, lr=self._cfg.learning_rate, momentum=self._cfg.momentum)
        return torch.optim.Adam(params, lr=self._cfg.learning_rate)

    def _train_loader(self) -> DataLoader:
        pipeline = build_pipeline(self._aug, TRAIN_MODE)
        return DataLoader(ImageDataset(self._split.train, self._class_index, pipeline),
                          batch_size=self._cfg.batch_size, shuffle=True,
                          generator=torch.Generator().manual_seed(self._cfg.seed),
                          num_workers=self._cfg.num_workers,
                          worker_init_fn=_reseed_worker if self._cfg.num_workers else None)

    def _train_epoch(self, loader: DataLoader, optimizer, criterion, device) -> float:
        self._model.train()
        total_loss, seen = 0.0, 0
        for batch, labels in loader:
            batch, labels = batch.to(device), labels.to(device)
            optimizer.zero_grad()
            loss = criterion(forward_logits(self._model, batch), labels)
            loss.backward()
            optimizer.step()
            total_loss += loss.item() * labels.size(0)
            seen += labels.size(0)
        return total_loss / seen

    def train(self) -> TrainingResult:
        self._check_inputs()
        cfg = self._cfg
        torch.manual_seed(cfg.seed)
        device = self._device or select_device()
        self._model.to(device)
        os.makedirs(self._out_dir, exist_ok=True)
        best_path = os.path.join(self._out_dir, BEST_CHECKPOINT)

        loader = self._train_loader()
        optimizer = self._optimizer()
        criterion = nn.CrossEntropyLoss()
        history, per_epoch = [], []
        best_accuracy = -1.0
        self._logger.info("Training on %d images, evaluating on %d [%s]",
                          len(self._split.train), len(self._split.test), cfg)

        for epoch in range(1, cfg.max_epochs + 1):
            start = time.perf_counter()
            train_loss = self._train_epoch(loader, optimizer, criterion, device)
            accuracy = evaluate_accuracy(self._model, self._split.test, self._aug, self._class_index,
                                         cfg.batch_size, device)
            metrics = EpochMetrics(epoch, train_loss, accuracy, time.perf_counter() - start)
            per_epoch.append(metrics)
            history.append(accuracy)
            self._logger.info("Epoch %d/%d: loss %.4f, accuracy %.4f, %.1fs", epoch, cfg.max_epochs,
                              train_loss, accuracy, metrics.wall_seconds)

            if accuracy > best_accuracy:
                best_accuracy = accuracy
                save_checkpoint(self._model, best_path, self._classes,
                                dict(cfg.to_dict(), target_size=self._aug.target_size))
            if should_stop(history, cfg.early_stopping_patience, cfg.early_stopping_min_delta):
                self._logger.info("Early stopping after epoch %d (no gain > %s in %d epochs)", epoch,
                                  cfg.early_stopping_min_delta, cfg.early_stopping_patience)
                break

        load_checkpoint(self._model, best_path)
        self._model.eval()
        result = TrainingResult(per_epoch, best_path, machine_descriptor(), cfg.to_dict())
        result.save(os.path.join(self._out_dir, RESULT_FILE), os.path.join(self._out_dir, METRICS_FILE))
        self._logger.info("Best accuracy %.4f at epoch %d of %d (%s)", result.final_accuracy, result.best_epoch,
                          result.epochs_run, format_duration(result.total_seconds))
        return result


def train(model: ClassifierModel, split: SplitAssignment, aug: AugmentationConfig, cfg: TrainingConfig,
          classes: list[str], out_dir: str, device: Optional[torch.device] = None) -> TrainingResult:
    return Trainer(model, split, classes, aug, cfg, out_dir, device).train()


def timing_report(result: TrainingResult) -> dict:
    return {
        "epochs": result.epochs_run,
        "total_seconds": result.total_seconds,
        "seconds_per_epoch": result.seconds_per_epoch,
        "total_time": format_duration(result.total_seconds),
        "minutes_per_epoch": round(result.seconds_per_epoch / 60.0, 2),
        "machine": result.machine or machine_descriptor(),
    }
