#!/usr/bin/env python3
import json
import logging
from dataclasses import dataclass, field, fields, replace
from typing import Optional

from .Errors import ConfigError
from .augment.Pipeline import AugmentationConfig, ColorJitterConfig, BlurConfig
from .compression.CorpusCompressor import CompressionConfig, DEFAULT_QUALITIES
from .dataset.CorpusScanner import DEFAULT_SCAN_WORKERS
from .dataset.Split import SplitConfig
from .experiment.ExperimentGrid import ExperimentGrid, DEFAULT_RUNS_ROOT
from .model.Specs import BackboneSpec, HeadSpec, WIDE_RESNET50, BACKBONES
from .training.TrainingResult import TrainingConfig

DEFAULT_LOG_LEVEL = "INFO"

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CorpusConfig:
    root: str = "corpus"
    manifest: Optional[str] = None
    workers: int = DEFAULT_SCAN_WORKERS


@dataclass(frozen=True)
class ModelConfig:
    backbone: str = WIDE_RESNET50
    pretrained: bool = True
    hidden_dim: int = 256
    dropout_p: float = 0.5

    def __post_init__(self):
        # fail at load time rather than when the first cell builds its model
        BackboneSpec(self.backbone, self.pretrained)
        HeadSpec(self.hidden_dim, self.dropout_p)

    def backbone_spec(self, name: Optional[str] = None) -> BackboneSpec:
        return BackboneSpec(name or self.backbone, self.pretrained)

    def head_spec(self, num_classes: int) -> HeadSpec:
        return HeadSpec(self.hidden_dim, self.dropout_p, num_classes)


@dataclass(frozen=True)
class GridConfig:
    backbones: tuple = BACKBONES
    qualities: tuple = DEFAULT_QUALITIES
    runs_root: str = DEFAULT_RUNS_ROOT
    cross_quality: bool = False


@dataclass(frozen=True)
class Config:
    log_level: str = DEFAULT_LOG_LEVEL
    corpus: CorpusConfig = field(default_factory=CorpusConfig)
    split: SplitConfig = field(default_factory=SplitConfig)
    augmentation: AugmentationConfig = field(default_factory=AugmentationConfig)
    compression: CompressionConfig = field(default_factory=CompressionConfig)
    model: ModelConfig = field(default_factory=ModelConfig)
    training: TrainingConfig = field(default_factory=TrainingConfig)
    grid: GridConfig = field(default_factory=GridConfig)

    def experiment_grid(self) -> ExperimentGrid:
        try:
            return ExperimentGrid(
                backbones=tuple(self.model.backbone_spec(name) for name in self.grid.backbones),
                corpus_root=self.corpus.root,
                qualities=self.grid.qualities,
                split=self.split,
                augmentation=self.augmentation,
                training=self.training,
                compression=replace(self.compression, qualities=self.grid.qualities),
                head=self.model.head_spec(HeadSpec().num_classes),
                runs_root=self.grid.runs_root,
                cross_quality=self.grid.cross_quality)
        except (TypeError, ValueError) as e:
            raise ConfigError("Invalid grid: %s" % e) from e


# sections whose list values are stored as tuples
_TUPLE_KEYS = {"qualities", "backbones"}


def _section(data: dict, name: str, cls, **nested):
    """Builds `cls` from a config section, ignoring unknown keys with a warning."""
    values = data.get(name, {})
    if not isinstance(values, dict):
        raise ConfigError("Section '%s' must be an object" % name)
    known = {f.name for f in fields(cls) if f.init}
    kwargs = {}
    for key, value in values.items():
        if key not in known:
            _logger.warning("Config: ignoring unknown key '%s.%s'", name, key)
            continue
        if key in nested:
            value = _section(values, key, nested[key])
        elif key in _TUPLE_KEYS and isinstance(value, list):
            value = tuple(value)
        kwargs[key] = value
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as e:
        raise ConfigError("Invalid '%s' section: %s" % (name, e)) from e


SECTIONS = ("corpus", "split", "augmentation", "compression", "model", "training", "grid")


def parse_config(data: dict) -> Config:
    if not isinstance(data, dict):
        raise ConfigError("The configuration must be a JSON object")
    for key in data:
        if key != "LOG_LEVEL" and key not in SECTIONS:
            _logger.warning("Config: ignoring unknown key '%s'", key)
    config = Config(
        log_level=str(data.get("LOG_LEVEL", DEFAULT_LOG_LEVEL)).upper(),
        corpus=_section(data, "corpus", CorpusConfig),
        split=_section(data, "split", SplitConfig),
        augmentation=_section(data, "augmentation", AugmentationConfig, jitter=ColorJitterConfig, blur=BlurConfig),
        compression=_section(data, "compression", CompressionConfig),
        model=_section(data, "model", ModelConfig),
        training=_section(data, "training", TrainingConfig),
        grid=_section(data, "grid", GridConfig))
    for name in config.grid.backbones:
        if name not in BACKBONES:
            raise ConfigError("Unknown backbone '%s' in grid (expected one of %s)" % (name, ", ".join(BACKBONES)))
    if config.log_level not in logging.getLevelNamesMapping():
        raise ConfigError("Unknown LOG_LEVEL '%s'" % config.log_level)
    return config


def load_config(path: Optional[str]) -> Config:
    if path is None:
        return Config()
    try:
        with open(path, 'r') as f:
            return parse_config(json.load(f))
    except OSError as e:
        raise ConfigError("Unable to read config %s: %s" % (path, e)) from e
    except json.JSONDecodeError as e:
        raise ConfigError("Config %s is not valid JSON (line %d column %d): %s" % (path, e.lineno, e.colno, e.msg)) from e
