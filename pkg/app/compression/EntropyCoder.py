#!/usr/bin/env python3
"""
Baseline sequential entropy coding of quantized 8x8 blocks.

DC coefficients are coded as differences from the previous block, AC
coefficients as (run, size) symbols in zigzag order with ZRL and EOB, both
through canonical Huffman codes built from the ITU-T T.81 Annex K tables.
"""
import numpy as np
from bitarray import bitarray
from bitarray.util import int2ba, ba2int

from ..Errors import DataError
from .Quantization import zigzag, inverse_zigzag

EOB = 0x00
ZRL = 0xF0
MAX_AC_MAGNITUDE = 1023
MAX_CODE_LENGTH = 16

DC_LUMINANCE_BITS = (0, 1, 5, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0)
DC_LUMINANCE_VALUES = tuple(range(12))
DC_CHROMINANCE_BITS = (0, 3, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0)
DC_CHROMINANCE_VALUES = tuple(range(12))

AC_LUMINANCE_BITS = (0, 2, 1, 3, 3, 2, 4, 3, 5, 5, 4, 4, 0, 0, 1, 0x7d)
AC_LUMINANCE_VALUES = (
    0x01, 0x02, 0x03, 0x00, 0x04, 0x11, 0x05, 0x12, 0x21, 0x31, 0x41, 0x06, 0x13, 0x51, 0x61, 0x07,
    0x22, 0x71, 0x14, 0x32, 0x81, 0x91, 0xa1, 0x08, 0x23, 0x42, 0xb1, 0xc1, 0x15, 0x52, 0xd1, 0xf0,
    0x24, 0x33, 0x62, 0x72, 0x82, 0x09, 0x0a, 0x16, 0x17, 0x18, 0x19, 0x1a, 0x25, 0x26, 0x27, 0x28,
    0x29, 0x2a, 0x34, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3a, 0x43, 0x44, 0x45, 0x46, 0x47, 0x48, 0x49,
    0x4a, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59, 0x5a, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68, 0x69,
    0x6a, 0x73, 0x74, 0x75, 0x76, 0x77, 0x78, 0x79, 0x7a, 0x83, 0x84, 0x85, 0x86, 0x87, 0x88, 0x89,
    0x8a, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99, 0x9a, 0xa2, 0xa3, 0xa4, 0xa5, 0xa6, 0xa7,
    0xa8, 0xa9, 0xaa, 0xb2, 0xb3, 0xb4, 0xb5, 0xb6, 0xb7, 0xb8, 0xb9, 0xba, 0xc2, 0xc3, 0xc4, 0xc5,
    0xc6, 0xc7, 0xc8, 0xc9, 0xca, 0xd2, 0xd3, 0xd4, 0xd5, 0xd6, 0xd7, 0xd8, 0xd9, 0xda, 0xe1, 0xe2,
    0xe3, 0xe4, 0xe5, 0xe6, 0xe7, 0xe8, 0xe9, 0xea, 0xf1, 0xf2, 0xf3, 0xf4, 0xf5, 0xf6, 0xf7, 0xf8,
    0xf9, 0xfa)

AC_CHROMINANCE_BITS = (0, 2, 1, 2, 4, 4, 3, 4, 7, 5, 4, 4, 0, 1, 2, 0x77)
AC_CHROMINANCE_VALUES = (
    0x00, 0x01, 0x02, 0x03, 0x11, 0x04, 0x05, 0x21, 0x31, 0x06, 0x12, 0x41, 0x51, 0x07, 0x61, 0x71,
    0x13, 0x22, 0x32, 0x81, 0x08, 0x14, 0x42, 0x91, 0xa1, 0xb1, 0xc1, 0x09, 0x23, 0x33, 0x52, 0xf0,
    0x15, 0x62, 0x72, 0xd1, 0x0a, 0x16, 0x24, 0x34, 0xe1, 0x25, 0xf1, 0x17, 0x18, 0x19, 0x1a, 0x26,
    0x27, 0x28, 0x29, 0x2a, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3a, 0x43, 0x44, 0x45, 0x46, 0x47, 0x48,
    0x49, 0x4a, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59, 0x5a, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68,
    0x69, 0x6a, 0x73, 0x74, 0x75, 0x76, 0x77, 0x78, 0x79, 0x7a, 0x82, 0x83, 0x84, 0x85, 0x86, 0x87,
    0x88, 0x89, 0x8a, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99, 0x9a, 0xa2, 0xa3, 0xa4, 0xa5,
    0xa6, 0xa7, 0xa8, 0xa9, 0xaa, 0xb2, 0xb3, 0xb4, 0xb5, 0xb6, 0xb7, 0xb8, 0xb9, 0xba, 0xc2, 0xc3,
    0xc4, 0xc5, 0xc6, 0xc7, 0xc8, 0xc9, 0xca, 0xd2, 0xd3, 0xd4, 0xd5, 0xd6, 0xd7, 0xd8, 0xd9, 0xda,
    0xe2, 0xe3, 0xe4, 0xe5, 0xe6, 0xe7, 0xe8, 0xe9, 0xea, 0xf2, 0xf3, 0xf4, 0xf5, 0xf6, 0xf7, 0xf8,
    0xf9, 0xfa)


class HuffmanTable:
    """Canonical Huffman code from a (BITS, HUFFVAL) pair."""

    def __init__(self, bits: tuple, values: tuple):
        if len(bits) != MAX_CODE_LENGTH or sum(bits) != len(values):
            raise ValueError("Inconsistent Huffman table specification")
        self._codes = {}
        self._lookup = {}
        code = 0
        k = 0
        for length in range(1, MAX_CODE_LENGTH + 1):
            for _ in range(bits[length - 1]):
                symbol = values[k]
                self._codes[symbol] = int2ba(code, length)
                self._lookup[(length, code)] = symbol
                code += 1
                k += 1
            code <<= 1

    def code(self, symbol: int) -> bitarray:
        return self._codes[symbol]

    def read(self, reader: "BitReader") -> int:
        code = 0
        for length in range(1, MAX_CODE_LENGTH + 1):
            code = (code << 1) | reader.bit()
            symbol = self._lookup.get((length, code))
            if symbol is not None:
                return symbol
        raise DataError("Invalid Huffman code in stream")


LUMINANCE_CODES = (HuffmanTable(DC_LUMINANCE_BITS, DC_LUMINANCE_VALUES),
                   HuffmanTable(AC_LUMINANCE_BITS, AC_LUMINANCE_VALUES))
CHROMINANCE_CODES = (HuffmanTable(DC_CHROMINANCE_BITS, DC_CHROMINANCE_VALUES),
                     HuffmanTable(AC_CHROMINANCE_BITS, AC_CHROMINANCE_VALUES))


class BitReader:
    def __init__(self, data: bytes):
        self._bits = bitarray()
        self._bits.frombytes(data)
        self._pos = 0

    def bit(self) -> int:
        if self._pos >= len(self._bits):
            raise DataError("Truncated entropy coded segment")
        b = self._bits[self._pos]
        self._pos += 1
        return b

    def bits(self, n: int) -> bitarray:
        if self._pos + n > len(self._bits):
            raise DataError("Truncated entropy coded segment")
        chunk = self._bits[self._pos:self._pos + n]
        self._pos += n
        return chunk


def magnitude_category(value: int) -> int:
    return int(abs(value)).bit_length()


def _write_value(out: bitarray, value: int, size: int):
    # negative values are sent as value - 1 in one's complement form
    if size:
        out.extend(int2ba(value if value > 0 else value + (1 << size) - 1, size))


def _read_value(reader: BitReader, size: int) -> int:
    if size == 0:
        return 0
    v = ba2int(reader.bits(size))
    return v if v >= 1 << (size - 1) else v - (1 << size) + 1


def encode_blocks(blocks: np.ndarray, codes: tuple) -> bytes:
    """Entropy codes quantized blocks of shape (n, 8, 8) in order."""
    dc_table, ac_table = codes
    seqs = zigzag(np.asarray(blocks, dtype=np.int64))
    seqs[:, 1:] = np.clip(seqs[:, 1:], -MAX_AC_MAGNITUDE, MAX_AC_MAGNITUDE)
    out = bitarray()
    previous_dc = 0
    for seq in seqs.tolist():
        diff = seq[0] - previous_dc
        previous_dc = seq[0]
        size = magnitude_category(diff)
        out.extend(dc_table.code(size))
        _write_value(out, diff, size)

        run = 0
        last_nonzero = max((i for i in range(1, 64) if seq[i] != 0), default=0)
        for i in range(1, last_nonzero + 1):
            v = seq[i]
            if v == 0:
                run += 1
                continue
            while run > 15:
                out.extend(ac_table.code(ZRL))
                run -= 16
            size = magnitude_category(v)
            out.extend(ac_table.code((run << 4) | size))
            _write_value(out, v, size)
            run = 0
        if last_nonzero < 63:
            out.extend(ac_table.code(EOB))
    # pad with 1-bits as a JPEG scan would
    out.extend("1" * (-len(out) % 8))
    return out.tobytes()


def decode_blocks(data: bytes, count: int, codes: tuple) -> np.ndarray:
    dc_table, ac_table = codes
    reader = BitReader(data)
    seqs = np.zeros((count, 64), dtype=np.int32)
    previous_dc = 0
    for n in range(count):
        previous_dc += _read_value(reader, dc_table.read(reader))
        seqs[n, 0] = previous_dc
        i = 1
        while i < 64:
            symbol = ac_table.read(reader)
            if symbol == EOB:
                break
            if symbol == ZRL:
                i += 16
                continue
            i += symbol >> 4
            if i > 63:
                raise DataError("AC coefficient index out of range")
            seqs[n, i] = _read_value(reader, symbol & 0x0F)
            i += 1
    return inverse_zigzag(seqs)
