#!/usr/bin/env python3
import math
from dataclasses import dataclass

import pandas as pd

from ..Errors import DataError
from ..compression.Quantization import MAX_QUALITY
from ..utils.Utils import format_bytes, format_duration
from .ExperimentGrid import GridResult

RESULTS_COLUMNS = ["backbone", "quality", "file_size_bytes", "first_epoch_acc", "final_acc", "epochs",
                   "total_seconds", "seconds_per_epoch"]
TABLE_COLUMNS = ["Experiment", "File sizes", "Percent of the Original Quality", "First-epoch accuracy",
                 "Final accuracy", "Epochs (Early stopping)", "Total Time", "Time per epoch (mins)"]
FAILED = "failed"


def results_frame(gr: GridResult) -> pd.DataFrame:
    """One row per cell, backbones in grid order and qualities descending; failed values are NaN."""
    rows = []
    for (backbone, quality), cell in gr.cells.items():
        report, result = cell.compression, cell.training
        row = {"backbone": backbone, "quality": quality,
               "file_size_bytes": report.output_bytes if report is not None else None}
        if not cell.failed:
            row.update(first_epoch_acc=result.first_epoch_accuracy, final_acc=result.final_accuracy,
                       epochs=result.epochs_run, total_seconds=result.total_seconds,
                       seconds_per_epoch=result.seconds_per_epoch)
        rows.append(row)
    frame = pd.DataFrame(rows, columns=RESULTS_COLUMNS)
    order = {b: i for i, b in enumerate(gr.backbones())}
    frame = frame.assign(_order=frame["backbone"].map(order))
    frame = frame.sort_values(["_order", "quality"], ascending=[True, False], kind="stable")
    return frame.drop(columns="_order").reset_index(drop=True)


def write_results_csv(gr: GridResult, path: str):
    results_frame(gr).to_csv(path, index=False, na_rep=FAILED)


def read_results_csv(path: str) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, na_values=[FAILED], keep_default_na=False, float_precision="round_trip")
    except (OSError, ValueError) as e:
        raise DataError("Unable to read results %s: %s" % (path, e)) from e
    if list(frame.columns) != RESULTS_COLUMNS:
        raise DataError("Unexpected results header in %s: %s" % (path, ",".join(frame.columns)))
    return frame


def _missing(value) -> bool:
    return value is None or (isinstance(value, float) and math.isnan(value))


def _cell(value, fmt) -> str:
    return FAILED if _missing(value) else fmt(value)


def _experiment_label(quality: int) -> str:
    return "Normal run" if quality == MAX_QUALITY else "JPEG compression"


@dataclass
class ResultsTable:
    backbone: str
    rows: pd.DataFrame

    @property
    def text(self) -> str:
        table = pd.DataFrame([[
            _experiment_label(int(r.quality)),
            _cell(r.file_size_bytes, lambda v: format_bytes(int(v))),
            "%d%%" % r.quality,
            _cell(r.first_epoch_acc, lambda v: "%.2f%%" % (100.0 * v)),
            _cell(r.final_acc, lambda v: "%.2f%%" % (100.0 * v)),
            _cell(r.epochs, lambda v: "%d" % v),
            _cell(r.total_seconds, format_duration),
            _cell(r.seconds_per_epoch, lambda v: "%.2f" % (v / 60.0)),
        ] for r in self.rows.itertuples(index=False)], columns=TABLE_COLUMNS)
        return "%s\n%s" % (self.backbone, table.to_string(index=False))

    def to_csv(self, path: str):
        self.rows.to_csv(path, index=False, na_rep=FAILED)


def table_from_frame(frame: pd.DataFrame, backbone: str) -> ResultsTable:
    rows = frame[frame["backbone"] == backbone].sort_values("quality", ascending=False, kind="stable")
    if rows.empty:
        raise ValueError("No results for backbone '%s'" % backbone)
    return ResultsTable(backbone, rows.reset_index(drop=True))


def emit_results_table(gr: GridResult, backbone: str) -> ResultsTable:
    return table_from_frame(results_frame(gr), backbone)


def tables_from_csv(path: str) -> list[ResultsTable]:
    frame = read_results_csv(path)
    return [table_from_frame(frame, b) for b in dict.fromkeys(frame["backbone"])]
