#!/usr/bin/env python3
import logging
import os
import shutil
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..Errors import DataError
from ..dataset.DatasetManifest import DatasetManifest
from ..dataset.ImageRecord import ImageRecord
from ..utils.ImageIO import read_rgb
from .Quantization import QualityLevel, MAX_QUALITY
from .RateDistortion import CompressionReport
from .ReferenceCodec import encode_reference, decode_reference, MZDC_EXTENSION
from .StandardCodec import encode_standard, decode_standard, JPEG_EXTENSION

ENGINES = ("standard", "reference")
DEFAULT_QUALITIES = (100, 50, 25)


@dataclass(frozen=True)
class CompressionConfig:
    qualities: tuple = DEFAULT_QUALITIES
    engine: str = "standard"
    optimize: bool = False
    chroma_subsampling: bool = True
    workers: int = 4

    def __post_init__(self):
        if self.engine not in ENGINES:
            raise ValueError("Unknown compression engine '%s' (expected one of %s)" % (self.engine, ", ".join(ENGINES)))
        if not self.qualities:
            raise ValueError("At least one quality level is required")
        qualities = tuple(QualityLevel(q) for q in self.qualities)
        if len(set(qualities)) != len(qualities):
            raise ValueError("Quality levels must be unique")
        object.__setattr__(self, "qualities", qualities)


@dataclass
class _ImageOutcome:
    record: ImageRecord
    squared_error: float = 0.0
    values: int = 0


class CorpusCompressor:
    """Re-encodes every image of a manifest at one quality into a mirrored directory tree."""

    def __init__(self, manifest: DatasetManifest, out_root: str, cfg: CompressionConfig = CompressionConfig()):
        self._logger = logging.getLogger(__name__)
        self._manifest = manifest
        self._out_root = out_root
        self._cfg = cfg
        self.path_map = {}

    def _output_path(self, record: ImageRecord, q: int) -> str:
        name = os.path.basename(record.path)
        if q != MAX_QUALITY:
            # a.jpg and a.png stay distinct: a_jpg.jpg, a_png.jpg
            stem, source_extension = os.path.splitext(name)
            extension = MZDC_EXTENSION if self._cfg.engine == "reference" else JPEG_EXTENSION
            name = "%s_%s%s" % (stem, source_extension.lstrip("."), extension)
        return os.path.join(self._out_root, record.class_id, name)

    def _encode(self, rgb: np.ndarray, q: int) -> tuple[bytes, np.ndarray]:
        if self._cfg.engine == "reference":
            stream = encode_reference(rgb, q, self._cfg.chroma_subsampling)
            return stream, decode_reference(stream)
        stream = encode_standard(rgb, q, self._cfg.optimize)
        return stream, decode_standard(stream)

    def _compress_one(self, record: ImageRecord, q: int) -> _ImageOutcome:
        out_path = self._output_path(record, q)
        try:
            os.makedirs(os.path.dirname(out_path), exist_ok=True)
            if q == MAX_QUALITY:
                # the q=100 arm is the untouched original corpus
                shutil.copyfile(record.path, out_path)
                outcome = _ImageOutcome(record)
            else:
                original = read_rgb(record.path)
                stream, decoded = self._encode(original, q)
                with open(out_path, 'wb') as fp:
                    fp.write(stream)
                diff = original.astype(np.float64) - decoded.astype(np.float64)
                outcome = _ImageOutcome(record, float(np.sum(diff * diff)), diff.size)
        except OSError as e:
            raise DataError("Unable to write %s: %s" % (out_path, e)) from e
        outcome.record = ImageRecord(out_path, record.class_id, record.width, record.height,
                                     os.path.getsize(out_path))
        self._logger.debug("Compressed %s -> %s (%d -> %d bytes)", record.path, out_path,
                           record.byte_size, outcome.record.byte_size)
        return outcome

    def compress(self, q: int) -> CompressionReport:
        q = QualityLevel(q)
        targets = [self._output_path(r, q) for r in self._manifest.records]
        if len(set(targets)) != len(targets):
            duplicate = next(t for t in targets if targets.count(t) > 1)
            raise DataError("Several images would be written to %s" % duplicate)
        self._logger.info("Compressing %d images at q=%d [%s engine] to %s",
                          len(self._manifest.records), q, self._cfg.engine, self._out_root)
        with ThreadPoolExecutor(max_workers=max(1, self._cfg.workers)) as pool:
            outcomes = list(pool.map(lambda r: self._compress_one(r, q), self._manifest.records))

        self.path_map = {src.path: o.record for src, o in zip(self._manifest.records, outcomes)}
        values = sum(o.values for o in outcomes)
        report = CompressionReport(
            quality=int(q),
            input_bytes=self._manifest.total_bytes(),
            output_bytes=sum(o.record.byte_size for o in outcomes),
            image_count=len(outcomes),
            mean_squared_error=sum(o.squared_error for o in outcomes) / values if values else 0.0,
            engine=self._cfg.engine)
        self._logger.info("q=%d: %d -> %d bytes, mse %.4f, psnr %.2f dB", q, report.input_bytes,
                          report.output_bytes, report.mean_squared_error, report.psnr_db)
        return report

    def compressed_manifest(self) -> DatasetManifest:
        return DatasetManifest(tuple(self.path_map[r.path] for r in self._manifest.records), self._manifest.classes)


def compress_corpus(manifest: DatasetManifest, q: int, out_root: str,
                    cfg: CompressionConfig = CompressionConfig()) -> CompressionReport:
    return CorpusCompressor(manifest, out_root, cfg).compress(q)
