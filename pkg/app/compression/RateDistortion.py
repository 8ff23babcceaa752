#!/usr/bin/env python3
import logging
import math
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

MAX_INTENSITY = 255.0
REPORT_COLUMNS = ["quality", "image_count", "input_bytes", "output_bytes", "mse", "psnr_db"]

_logger = logging.getLogger(__name__)


def mean_squared_error(original: np.ndarray, decoded: np.ndarray) -> float:
    return float(np.mean((original.astype(np.float64) - decoded.astype(np.float64)) ** 2))


def psnr(mse: float) -> float:
    if mse <= 0.0:
        return math.inf
    return 10.0 * math.log10(MAX_INTENSITY ** 2 / mse)


@dataclass(frozen=True)
class CompressionReport:
    quality: int
    input_bytes: int
    output_bytes: int
    image_count: int
    mean_squared_error: float
    engine: str = "standard"

    def __post_init__(self):
        if self.output_bytes <= 0 or self.image_count < 1:
            raise ValueError("A compression report needs at least one non empty image")

    @property
    def psnr_db(self) -> float:
        return psnr(self.mean_squared_error)

    @property
    def lossless(self) -> bool:
        return self.mean_squared_error == 0.0


@dataclass
class RateDistortionTable:
    rows: pd.DataFrame
    violations: list = field(default_factory=list)

    def to_csv(self, path: str):
        self.rows[REPORT_COLUMNS].to_csv(path, index=False)

    def to_text(self) -> str:
        table = self.rows[REPORT_COLUMNS].copy()
        table["psnr_db"] = ["lossless" if math.isinf(v) else "%.2f" % v for v in table["psnr_db"]]
        text = table.to_string(index=False)
        for v in self.violations:
            text += "\n! %s" % v
        return text


def rate_distortion_report(reports: list[CompressionReport]) -> RateDistortionTable:
    """Rate against distortion, highest quality first; monotonicity violations are flagged, not raised."""
    if not reports:
        raise ValueError("At least one compression report is required")
    ordered = sorted(reports, key=lambda r: r.quality, reverse=True)
    rows = pd.DataFrame([{
        "quality": r.quality,
        "image_count": r.image_count,
        "input_bytes": r.input_bytes,
        "output_bytes": r.output_bytes,
        "mse": r.mean_squared_error,
        "psnr_db": r.psnr_db,
    } for r in ordered], columns=REPORT_COLUMNS)

    violations = []
    for higher, lower in zip(ordered, ordered[1:]):
        if lower.output_bytes > higher.output_bytes:
            violations.append("rate increases from q=%d (%d bytes) to q=%d (%d bytes)"
                              % (higher.quality, higher.output_bytes, lower.quality, lower.output_bytes))
        if lower.mean_squared_error < higher.mean_squared_error:
            violations.append("distortion decreases from q=%d (mse %.4f) to q=%d (mse %.4f)"
                              % (higher.quality, higher.mean_squared_error, lower.quality, lower.mean_squared_error))
    for v in violations:
        _logger.warning("Rate-distortion monotonicity violation: %s", v)
    return RateDistortionTable(rows, violations)
