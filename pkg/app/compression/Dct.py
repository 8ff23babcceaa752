#!/usr/bin/env python3
import numpy as np
from scipy.fft import dctn, idctn

from .Quantization import BLOCK_SIZE

LEVEL_SHIFT = 128


def _check_blocks(blocks: np.ndarray):
    blocks = np.asarray(blocks, dtype=np.float64)
    if blocks.ndim < 2 or blocks.shape[-2:] != (BLOCK_SIZE, BLOCK_SIZE):
        raise ValueError("Expected 8x8 block(s), got shape %s" % (blocks.shape,))
    return blocks


def block_dct_forward(block: np.ndarray) -> np.ndarray:
    """Orthonormal 2-D DCT-II of level-shifted 8x8 block(s); leading axes are batch axes."""
    return dctn(_check_blocks(block), type=2, norm="ortho", axes=(-2, -1))


def block_dct_inverse(coeffs: np.ndarray) -> np.ndarray:
    return idctn(_check_blocks(coeffs), type=2, norm="ortho", axes=(-2, -1))


def to_blocks(plane: np.ndarray) -> np.ndarray:
    """Edge-replicates a HxW plane to multiples of 8 and tiles it into (rows, cols, 8, 8)."""
    h, w = plane.shape
    padded = np.pad(plane, ((0, -h % BLOCK_SIZE), (0, -w % BLOCK_SIZE)), mode="edge")
    rows, cols = padded.shape[0] // BLOCK_SIZE, padded.shape[1] // BLOCK_SIZE
    return padded.reshape(rows, BLOCK_SIZE, cols, BLOCK_SIZE).swapaxes(1, 2)


def from_blocks(blocks: np.ndarray, height: int, width: int) -> np.ndarray:
    rows, cols = blocks.shape[:2]
    plane = blocks.swapaxes(1, 2).reshape(rows * BLOCK_SIZE, cols * BLOCK_SIZE)
    return plane[:height, :width]
