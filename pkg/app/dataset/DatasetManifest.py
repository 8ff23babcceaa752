#!/usr/bin/env python3
import json
import logging
import os
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from ..Errors import DataError, LeakageError, ManifestParseError
from .ImageRecord import ImageRecord, RECORD_FIELDS
from .Split import SplitAssignment

MANIFEST_KEYS = ("classes", "records", "split", "seed", "train_fraction")
MIN_IMAGES_PER_CLASS = 2

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DatasetManifest:
    records: tuple[ImageRecord, ...]
    classes: tuple[str, ...]
    split: Optional[SplitAssignment] = None
    seed: Optional[int] = None
    train_fraction: Optional[float] = None
    counts_per_class: dict = field(init=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "counts_per_class", dict(Counter(r.class_id for r in self.records)))

    def validate(self):
        known = set(self.classes)
        for r in self.records:
            if r.class_id not in known:
                raise DataError("Record %s has unknown class '%s'" % (r.path, r.class_id))
        for class_id in self.classes:
            count = self.counts_per_class.get(class_id, 0)
            if count < MIN_IMAGES_PER_CLASS:
                raise DataError("Class '%s' has %d image(s), at least %d are required"
                                % (class_id, count, MIN_IMAGES_PER_CLASS))
        if self.split is not None:
            self._validate_split(self.split)
        return self

    def _validate_split(self, split: SplitAssignment):
        paths = {r.path for r in self.records}
        for r in split.train + split.test:
            if r.path not in paths:
                raise DataError("Split references unknown image %s" % r.path)
        overlap = split.overlap()
        if overlap:
            raise LeakageError("%d image(s) are on both sides of the split, eg. %s" % (len(overlap), sorted(overlap)[0]))
        unassigned = paths - set(split.train_paths) - set(split.test_paths)
        if unassigned:
            raise DataError("%d image(s) are on neither side of the split, eg. %s"
                            % (len(unassigned), sorted(unassigned)[0]))
        for side in ("train", "test"):
            missing = set(self.classes) - split.classes(side)
            if missing:
                raise DataError("Classes missing from the %s split: %s" % (side, ", ".join(sorted(missing))))

    def class_index(self) -> dict[str, int]:
        return {c: i for i, c in enumerate(self.classes)}

    def records_by_class(self) -> dict[str, list[ImageRecord]]:
        groups = {c: [] for c in self.classes}
        for r in self.records:
            groups[r.class_id].append(r)
        return groups

    def total_bytes(self) -> int:
        return sum(r.byte_size for r in self.records)

    def with_split(self, split: SplitAssignment, seed: int, train_fraction: float) -> "DatasetManifest":
        return DatasetManifest(self.records, self.classes, split, seed, train_fraction)


def save_manifest(manifest: DatasetManifest, path: str):
    data = {
        "classes": list(manifest.classes),
        "records": [r.to_dict() for r in manifest.records],
    }
    if manifest.split is not None:
        data["split"] = {"train": manifest.split.train_paths, "test": manifest.split.test_paths}
    if manifest.seed is not None:
        data["seed"] = manifest.seed
    if manifest.train_fraction is not None:
        data["train_fraction"] = manifest.train_fraction
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, 'w') as fp:
        json.dump(data, fp, indent=2)
    _logger.info("Manifest saved to %s (%d classes, %d records)", path, len(manifest.classes), len(manifest.records))


def _require(data: dict, key: str, path: str, context: str):
    if key not in data:
        raise ManifestParseError(path, context + key, "missing field")
    return data[key]


def load_manifest(path: str) -> DatasetManifest:
    try:
        with open(path, 'r') as fp:
            content = fp.read()
    except OSError as e:
        raise DataError("Unable to read manifest %s: %s" % (path, e)) from e
    try:
        data = json.loads(content)
    except json.JSONDecodeError as e:
        raise ManifestParseError(path, "line %d column %d" % (e.lineno, e.colno), e.msg) from e
    if not isinstance(data, dict):
        raise ManifestParseError(path, "<root>", "expected an object")

    for key in data:
        if key not in MANIFEST_KEYS:
            _logger.warning("Manifest %s: ignoring unknown field '%s'", path, key)

    classes = _require(data, "classes", path, "")
    if not isinstance(classes, list):
        raise ManifestParseError(path, "classes", "expected a list")
    records = []
    for i, entry in enumerate(_require(data, "records", path, "")):
        context = "records[%d]." % i
        if not isinstance(entry, dict):
            raise ManifestParseError(path, "records[%d]" % i, "expected an object")
        for key in entry:
            if key not in RECORD_FIELDS:
                _logger.warning("Manifest %s: ignoring unknown field '%s%s'", path, context, key)
        for key in RECORD_FIELDS:
            _require(entry, key, path, context)
        try:
            records.append(ImageRecord.from_dict(entry))
        except (TypeError, ValueError) as e:
            raise ManifestParseError(path, "records[%d]" % i, str(e)) from e

    split = None
    if "split" in data:
        by_path = {r.path: r for r in records}
        sides = {}
        for side in ("train", "test"):
            paths = _require(data["split"], side, path, "split.")
            try:
                sides[side] = tuple(by_path[p] for p in paths)
            except KeyError as e:
                raise ManifestParseError(path, "split.%s" % side, "unknown image %s" % e.args[0]) from e
        split = SplitAssignment(sides["train"], sides["test"])

    manifest = DatasetManifest(tuple(records), tuple(str(c) for c in classes), split,
                               data.get("seed"), data.get("train_fraction"))
    return manifest.validate()
