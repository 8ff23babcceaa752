#!/usr/bin/env python3
from dataclasses import dataclass, field
from typing import Optional

from ..augment.Pipeline import AugmentationConfig
from ..compression.CorpusCompressor import CompressionConfig, DEFAULT_QUALITIES
from ..compression.Quantization import QualityLevel
from ..compression.RateDistortion import CompressionReport
from ..dataset.Split import SplitConfig
from ..model.Specs import BackboneSpec, HeadSpec
from ..training.TrainingResult import TrainingConfig, TrainingResult

DEFAULT_RUNS_ROOT = "runs"


@dataclass(frozen=True)
class ExperimentGrid:
    """{backbone} x {quality} sweep sharing one split, one augmentation and one training setup."""
    backbones: tuple[BackboneSpec, ...]
    corpus_root: str
    qualities: tuple = DEFAULT_QUALITIES
    split: SplitConfig = field(default_factory=SplitConfig)
    augmentation: AugmentationConfig = field(default_factory=AugmentationConfig)
    training: TrainingConfig = field(default_factory=TrainingConfig)
    compression: CompressionConfig = field(default_factory=CompressionConfig)
    head: HeadSpec = field(default_factory=HeadSpec)
    runs_root: str = DEFAULT_RUNS_ROOT
    cross_quality: bool = False

    def __post_init__(self):
        if not self.backbones:
            raise ValueError("An experiment grid needs at least one backbone")
        if not self.qualities:
            raise ValueError("An experiment grid needs at least one quality level")
        qualities = tuple(QualityLevel(q) for q in self.qualities)
        if len(set(qualities)) != len(qualities):
            raise ValueError("Grid quality levels must be unique, got %s" % list(self.qualities))
        names = [b.name for b in self.backbones]
        if len(set(names)) != len(names):
            raise ValueError("Grid backbones must be unique, got %s" % names)
        object.__setattr__(self, "backbones", tuple(self.backbones))
        object.__setattr__(self, "qualities", qualities)

    @property
    def cell_count(self) -> int:
        return len(self.backbones) * len(self.qualities)


@dataclass
class CellResult:
    backbone: str
    quality: int
    split_fingerprint: str = ""
    compression: Optional[CompressionReport] = None
    training: Optional[TrainingResult] = None
    error: Optional[str] = None
    cross_quality: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.error is not None or self.training is None


@dataclass
class GridResult:
    run_dir: str
    cells: dict = field(default_factory=dict)

    def cell(self, backbone: str, quality: int) -> Optional[CellResult]:
        return self.cells.get((backbone, int(quality)))

    def backbones(self) -> list[str]:
        return list(dict.fromkeys(b for b, _ in self.cells))

    def failures(self) -> list[CellResult]:
        return [c for c in self.cells.values() if c.failed]

    def fingerprints(self) -> set[str]:
        return {c.split_fingerprint for c in self.cells.values() if c.split_fingerprint}
