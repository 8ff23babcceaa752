#!/usr/bin/env python3
import json
from dataclasses import dataclass, field, asdict
from typing import Optional

import pandas as pd

OPTIMIZERS = ("adam", "sgd")
METRICS_COLUMNS = ["epoch", "train_loss", "eval_accuracy", "wall_seconds"]


@dataclass(frozen=True)
class TrainingConfig:
    max_epochs: int = 50
    early_stopping_patience: int = 5
    early_stopping_min_delta: float = 0.001
    batch_size: int = 32
    learning_rate: float = 1e-4
    optimizer: str = "adam"
    momentum: float = 0.9
    seed: int = 0
    num_workers: int = 0
    freeze_backbone: bool = False

    def __post_init__(self):
        if self.max_epochs < 1 or self.early_stopping_patience < 1 or self.batch_size < 1:
            raise ValueError("max_epochs, early_stopping_patience and batch_size must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.optimizer not in OPTIMIZERS:
            raise ValueError("Unknown optimizer '%s' (expected one of %s)" % (self.optimizer, ", ".join(OPTIMIZERS)))
        if self.num_workers < 0:
            raise ValueError("num_workers must be >= 0")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class EpochMetrics:
    epoch_index: int
    train_loss: float
    eval_accuracy: float
    wall_seconds: float

    def __post_init__(self):
        if not 0.0 <= self.eval_accuracy <= 1.0:
            raise ValueError("Accuracy must be in [0, 1], got %s" % self.eval_accuracy)
        if self.wall_seconds <= 0:
            raise ValueError("Epoch wall time must be positive, got %s" % self.wall_seconds)


@dataclass
class TrainingResult:
    per_epoch: list[EpochMetrics]
    best_checkpoint_path: str
    machine: str = ""
    config: dict = field(default_factory=dict)

    @property
    def epochs_run(self) -> int:
        return len(self.per_epoch)

    @property
    def first_epoch_accuracy(self) -> float:
        return self.per_epoch[0].eval_accuracy

    @property
    def final_accuracy(self) -> float:
        return max(m.eval_accuracy for m in self.per_epoch)

    @property
    def best_epoch(self) -> int:
        best = self.final_accuracy
        return next(m.epoch_index for m in self.per_epoch if m.eval_accuracy == best)

    @property
    def total_seconds(self) -> float:
        return sum(m.wall_seconds for m in self.per_epoch)

    @property
    def seconds_per_epoch(self) -> float:
        return self.total_seconds / self.epochs_run

    def metrics_frame(self) -> pd.DataFrame:
        return pd.DataFrame([[m.epoch_index, m.train_loss, m.eval_accuracy, m.wall_seconds] for m in self.per_epoch],
                            columns=METRICS_COLUMNS)

    def to_dict(self) -> dict:
        return {
            "first_epoch_accuracy": self.first_epoch_accuracy,
            "final_accuracy": self.final_accuracy,
            "epochs_run": self.epochs_run,
            "best_epoch": self.best_epoch,
            "total_seconds": self.total_seconds,
            "seconds_per_epoch": self.seconds_per_epoch,
            "best_checkpoint_path": self.best_checkpoint_path,
            "machine": self.machine,
            "config": self.config,
            "per_epoch": [asdict(m) for m in self.per_epoch],
        }

    @staticmethod
    def from_dict(data: dict) -> "TrainingResult":
        return TrainingResult([EpochMetrics(**m) for m in data["per_epoch"]], data["best_checkpoint_path"],
                              data.get("machine", ""), data.get("config", {}))

    def save(self, result_path: str, metrics_path: Optional[str] = None):
        with open(result_path, 'w') as fp:
            json.dump(self.to_dict(), fp, indent=2)
        if metrics_path is not None:
            self.metrics_frame().to_csv(metrics_path, index=False)

    @staticmethod
    def load(result_path: str) -> "TrainingResult":
        with open(result_path, 'r') as fp:
            return TrainingResult.from_dict(json.load(fp))
