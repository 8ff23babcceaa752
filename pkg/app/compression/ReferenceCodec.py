#!/usr/bin/env python3
"""
Reference block-DCT codec.

Pipeline: RGB -> YCbCr (JFIF full range) -> optional 4:2:0 chroma
subsampling -> per-channel 8x8 tiling with edge replication -> level shift
-> forward DCT -> quantization with the quality-scaled Annex K tables ->
zigzag, run-length and Huffman coding.

Stream layout (private container, not interoperable with JFIF):

    magic     4 bytes  b"MZDC"
    version   u8       1
    width     u16      big endian
    height    u16
    quality   u8
    flags     u8       bit 0: chroma subsampled 4:2:0
    channels  u8       3
    then for each channel (Y, Cb, Cr):
    length    u32      payload size in bytes
    payload   bytes    entropy coded blocks in raster order
"""
import struct

import numpy as np
import torch

from ..Errors import DataError
from ..utils.PixelTensor import to_rgb, to_tensor, check_pixel_tensor
from .Dct import LEVEL_SHIFT, block_dct_forward, block_dct_inverse, to_blocks, from_blocks
from .EntropyCoder import encode_blocks, decode_blocks, LUMINANCE_CODES, CHROMINANCE_CODES
from .Quantization import (BLOCK_SIZE, LUMINANCE_TABLE, CHROMINANCE_TABLE, QualityLevel,
                           scaled_table, quantize, dequantize)

MZDC_MAGIC = b"MZDC"
MZDC_VERSION = 1
MZDC_EXTENSION = ".mzdc"
FLAG_SUBSAMPLED = 0x01
_HEADER = struct.Struct(">4sBHHBBB")
_LENGTH = struct.Struct(">I")

_RGB_TO_YCBCR = np.array([[0.299, 0.587, 0.114],
                          [-0.168736, -0.331264, 0.5],
                          [0.5, -0.418688, -0.081312]])
_YCBCR_TO_RGB = np.array([[1.0, 0.0, 1.402],
                          [1.0, -0.344136, -0.714136],
                          [1.0, 1.772, 0.0]])
_CHROMA_OFFSET = np.array([0.0, 128.0, 128.0])


def rgb_to_ycbcr(rgb: np.ndarray) -> np.ndarray:
    return rgb.astype(np.float64) @ _RGB_TO_YCBCR.T + _CHROMA_OFFSET


def ycbcr_to_rgb(ycc: np.ndarray) -> np.ndarray:
    rgb = (ycc - _CHROMA_OFFSET) @ _YCBCR_TO_RGB.T
    return np.clip(np.round(rgb), 0, 255).astype(np.uint8)


def downsample(plane: np.ndarray) -> np.ndarray:
    """2x2 box average, odd edges replicated."""
    h, w = plane.shape
    padded = np.pad(plane, ((0, h % 2), (0, w % 2)), mode="edge")
    return padded.reshape(padded.shape[0] // 2, 2, padded.shape[1] // 2, 2).mean(axis=(1, 3))


def _upsample_axis(plane: np.ndarray, axis: int) -> np.ndarray:
    # triangle filter: each output sample is 3/4 nearer + 1/4 further input sample
    n = plane.shape[axis]
    previous = np.take(plane, np.clip(np.arange(n) - 1, 0, n - 1), axis=axis)
    following = np.take(plane, np.clip(np.arange(n) + 1, 0, n - 1), axis=axis)
    even = 0.75 * plane + 0.25 * previous
    odd = 0.75 * plane + 0.25 * following
    return np.stack((even, odd), axis=axis + 1).reshape(plane.shape[:axis] + (2 * n,) + plane.shape[axis + 1:])


def upsample(plane: np.ndarray, height: int, width: int) -> np.ndarray:
    return _upsample_axis(_upsample_axis(plane, 0), 1)[:height, :width]


def _encode_plane(plane: np.ndarray, table: np.ndarray, codes: tuple) -> bytes:
    blocks = to_blocks(plane) - LEVEL_SHIFT
    rows, cols = blocks.shape[:2]
    quantized = quantize(block_dct_forward(blocks), table)
    return encode_blocks(quantized.reshape(rows * cols, BLOCK_SIZE, BLOCK_SIZE), codes)


def _decode_plane(payload: bytes, height: int, width: int, table: np.ndarray, codes: tuple) -> np.ndarray:
    rows, cols = -(-height // BLOCK_SIZE), -(-width // BLOCK_SIZE)
    quantized = decode_blocks(payload, rows * cols, codes).reshape(rows, cols, BLOCK_SIZE, BLOCK_SIZE)
    blocks = block_dct_inverse(dequantize(quantized, table)) + LEVEL_SHIFT
    return from_blocks(blocks, height, width)


def _chroma_size(height: int, width: int, subsampled: bool) -> tuple[int, int]:
    if subsampled:
        return -(-height // 2), -(-width // 2)
    return height, width


def encode_reference(rgb: np.ndarray, q: int, subsampling: bool = True) -> bytes:
    """Encodes a HxWx3 uint8 image."""
    q = QualityLevel(q)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ValueError("Expected a HxWx3 image, got shape %s" % (rgb.shape,))
    height, width = rgb.shape[:2]
    if not (0 < height < 1 << 16 and 0 < width < 1 << 16):
        raise ValueError("Unsupported image size %dx%d" % (width, height))
    ycc = rgb_to_ycbcr(rgb)
    luma_table, chroma_table = scaled_table(LUMINANCE_TABLE, q), scaled_table(CHROMINANCE_TABLE, q)

    payloads = [_encode_plane(ycc[:, :, 0], luma_table, LUMINANCE_CODES)]
    for c in (1, 2):
        plane = downsample(ycc[:, :, c]) if subsampling else ycc[:, :, c]
        payloads.append(_encode_plane(plane, chroma_table, CHROMINANCE_CODES))

    flags = FLAG_SUBSAMPLED if subsampling else 0
    stream = _HEADER.pack(MZDC_MAGIC, MZDC_VERSION, width, height, int(q), flags, len(payloads))
    for payload in payloads:
        stream += _LENGTH.pack(len(payload)) + payload
    return stream


def read_header(stream: bytes) -> dict:
    if len(stream) < _HEADER.size:
        raise DataError("Truncated MZDC stream")
    magic, version, width, height, quality, flags, channels = _HEADER.unpack_from(stream)
    if magic != MZDC_MAGIC:
        raise DataError("Not a MZDC stream")
    if version != MZDC_VERSION:
        raise DataError("Unsupported MZDC version %d" % version)
    if channels != 3 or width == 0 or height == 0 or not 1 <= quality <= 100:
        raise DataError("Invalid MZDC header")
    return {"width": width, "height": height, "quality": quality, "subsampled": bool(flags & FLAG_SUBSAMPLED)}


def decode_reference(stream: bytes) -> np.ndarray:
    """Decodes a MZDC stream to a HxWx3 uint8 image."""
    header = read_header(stream)
    height, width, q = header["height"], header["width"], QualityLevel(header["quality"])
    luma_table, chroma_table = scaled_table(LUMINANCE_TABLE, q), scaled_table(CHROMINANCE_TABLE, q)
    chroma_h, chroma_w = _chroma_size(height, width, header["subsampled"])

    offset = _HEADER.size
    planes = []
    for c in range(3):
        if offset + _LENGTH.size > len(stream):
            raise DataError("Truncated MZDC stream")
        (length,) = _LENGTH.unpack_from(stream, offset)
        offset += _LENGTH.size
        if offset + length > len(stream):
            raise DataError("Truncated MZDC stream")
        payload = stream[offset:offset + length]
        offset += length
        if c == 0:
            planes.append(_decode_plane(payload, height, width, luma_table, LUMINANCE_CODES))
        else:
            plane = _decode_plane(payload, chroma_h, chroma_w, chroma_table, CHROMINANCE_CODES)
            planes.append(upsample(plane, height, width) if header["subsampled"] else plane)
    return ycbcr_to_rgb(np.stack(planes, axis=-1))


def compress_image_reference(img: torch.Tensor, q: int, subsampling: bool = True) -> tuple[bytes, torch.Tensor]:
    """Encodes a PixelTensor and returns the stream with its decoded image."""
    stream = encode_reference(to_rgb(check_pixel_tensor(img)), q, subsampling)
    return stream, to_tensor(decode_reference(stream))
