#!/usr/bin/env python3
"""
Quality levels and quantization tables.

Base tables are the luminance/chrominance examples of ITU-T T.81 Annex K,
scaled by the usual two-piece quality formula.
"""
import numpy as np

BLOCK_SIZE = 8
MIN_QUALITY = 1
MAX_QUALITY = 100

LUMINANCE_TABLE = np.array([
    [16, 11, 10, 16, 24, 40, 51, 61],
    [12, 12, 14, 19, 26, 58, 60, 55],
    [14, 13, 16, 24, 40, 57, 69, 56],
    [14, 17, 22, 29, 51, 87, 80, 62],
    [18, 22, 37, 56, 68, 109, 103, 77],
    [24, 35, 55, 64, 81, 104, 113, 92],
    [49, 64, 78, 87, 103, 121, 120, 101],
    [72, 92, 95, 98, 112, 100, 103, 99]], dtype=np.int32)

CHROMINANCE_TABLE = np.array([
    [17, 18, 24, 47, 99, 99, 99, 99],
    [18, 21, 26, 66, 99, 99, 99, 99],
    [24, 26, 56, 99, 99, 99, 99, 99],
    [47, 66, 99, 99, 99, 99, 99, 99],
    [99, 99, 99, 99, 99, 99, 99, 99],
    [99, 99, 99, 99, 99, 99, 99, 99],
    [99, 99, 99, 99, 99, 99, 99, 99],
    [99, 99, 99, 99, 99, 99, 99, 99]], dtype=np.int32)

# ZIGZAG[k] is the raster index of the k-th coefficient in zigzag order
ZIGZAG = np.array([
    0, 1, 8, 16, 9, 2, 3, 10,
    17, 24, 32, 25, 18, 11, 4, 5,
    12, 19, 26, 33, 40, 48, 41, 34,
    27, 20, 13, 6, 7, 14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36,
    29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46,
    53, 60, 61, 54, 47, 55, 62, 63], dtype=np.int64)


class QualityLevel(int):
    """Encoder quality parameter q, 1..100."""

    def __new__(cls, q):
        if isinstance(q, bool) or int(q) != q:
            raise ValueError("Quality must be an integer, got %r" % (q,))
        q = int(q)
        if not MIN_QUALITY <= q <= MAX_QUALITY:
            raise ValueError("Quality must be in [%d, %d], got %d" % (MIN_QUALITY, MAX_QUALITY, q))
        return super().__new__(cls, q)


def quality_to_scale(q: int) -> float:
    q = QualityLevel(q)
    if q < 50:
        return 5000.0 / q
    return 200.0 - 2.0 * q


def scaled_table(base: np.ndarray, q: int) -> np.ndarray:
    """Scales a base table for quality q; entries clamp to [1, 255]."""
    scale = quality_to_scale(q)
    table = np.floor(base.astype(np.float64) * scale / 100.0 + 0.5)
    return check_table(np.clip(table, 1, 255).astype(np.int32))


def check_table(table: np.ndarray) -> np.ndarray:
    if table.shape != (BLOCK_SIZE, BLOCK_SIZE):
        raise ValueError("Quantization table must be 8x8, got %s" % (table.shape,))
    if table.min() < 1 or table.max() > 255:
        raise ValueError("Quantization table entries must be in [1, 255]")
    return table


def quantize(coeffs: np.ndarray, table: np.ndarray) -> np.ndarray:
    if coeffs.shape[-2:] != table.shape:
        raise ValueError("Coefficient shape %s does not match table shape %s" % (coeffs.shape, table.shape))
    return np.round(coeffs / table).astype(np.int32)


def dequantize(ints: np.ndarray, table: np.ndarray) -> np.ndarray:
    if ints.shape[-2:] != table.shape:
        raise ValueError("Coefficient shape %s does not match table shape %s" % (ints.shape, table.shape))
    return (ints * table).astype(np.float64)


def zigzag(block: np.ndarray) -> np.ndarray:
    """(..., 8, 8) to (..., 64) in zigzag order."""
    return block.reshape(block.shape[:-2] + (BLOCK_SIZE * BLOCK_SIZE,))[..., ZIGZAG]


def inverse_zigzag(seq: np.ndarray) -> np.ndarray:
    raster = np.empty_like(seq)
    raster[..., ZIGZAG] = seq
    return raster.reshape(seq.shape[:-1] + (BLOCK_SIZE, BLOCK_SIZE))
