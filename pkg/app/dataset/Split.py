#!/usr/bin/env python3
import hashlib
import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .ImageRecord import ImageRecord

if TYPE_CHECKING:
    from .DatasetManifest import DatasetManifest

DEFAULT_TRAIN_FRACTION = 0.7
DEFAULT_SPLIT_SEED = 42

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SplitConfig:
    train_fraction: float = DEFAULT_TRAIN_FRACTION
    seed: int = DEFAULT_SPLIT_SEED

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must be in (0, 1), got %s" % self.train_fraction)


@dataclass(frozen=True)
class SplitAssignment:
    train: tuple[ImageRecord, ...]
    test: tuple[ImageRecord, ...]

    @property
    def train_paths(self) -> list[str]:
        return [r.path for r in self.train]

    @property
    def test_paths(self) -> list[str]:
        return [r.path for r in self.test]

    def classes(self, side: str) -> set[str]:
        return {r.class_id for r in getattr(self, side)}

    def overlap(self) -> set[str]:
        return set(self.train_paths) & set(self.test_paths)

    def fingerprint(self) -> str:
        """sha256 of the sorted train and test path lists."""
        h = hashlib.sha256()
        for side in (sorted(self.train_paths), sorted(self.test_paths)):
            h.update("\n".join(side).encode("utf-8"))
            h.update(b"\x00")
        return h.hexdigest()

    def remap(self, path_map: dict[str, ImageRecord]) -> "SplitAssignment":
        """Same assignment with every record replaced by its counterpart (eg. its compressed copy)."""
        return SplitAssignment(tuple(path_map[r.path] for r in self.train),
                               tuple(path_map[r.path] for r in self.test))


def holdout_count(n: int, train_fraction: float) -> int:
    # floor the test count, at least one image on each side
    return min(n - 1, max(1, math.floor((1.0 - train_fraction) * n + 1e-9)))


def stratified_split(manifest: "DatasetManifest", cfg: SplitConfig) -> SplitAssignment:
    rng = np.random.default_rng(cfg.seed)
    by_class = manifest.records_by_class()
    train, test = [], []
    for class_id in manifest.classes:
        records = sorted(by_class[class_id], key=lambda r: r.path)
        order = rng.permutation(len(records))
        n_test = holdout_count(len(records), cfg.train_fraction)
        test.extend(records[i] for i in order[:n_test])
        train.extend(records[i] for i in order[n_test:])
    split = SplitAssignment(tuple(train), tuple(test))
    _logger.info("Split %d classes: %d train / %d test images [seed %d, fingerprint %s]",
                 len(manifest.classes), len(train), len(test), cfg.seed, split.fingerprint()[:12])
    return split
