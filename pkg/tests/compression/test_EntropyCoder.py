import unittest

import numpy as np

from app.Errors import DataError
from app.compression.EntropyCoder import (encode_blocks, decode_blocks, magnitude_category, HuffmanTable,
                                          LUMINANCE_CODES, CHROMINANCE_CODES, DC_LUMINANCE_BITS, DC_LUMINANCE_VALUES)


class TestEntropyCoder(unittest.TestCase):

    def test_magnitude_category(self):
        self.assertEqual([magnitude_category(v) for v in (0, 1, -1, 2, 3, -4, 1023)], [0, 1, 1, 2, 2, 3, 10])

    def test_dc_luminance_codes(self):
        table = HuffmanTable(DC_LUMINANCE_BITS, DC_LUMINANCE_VALUES)
        self.assertEqual(table.code(0).to01(), "00")
        self.assertEqual(table.code(1).to01(), "010")
        self.assertEqual(table.code(11).to01(), "111111110")

    def test_inconsistent_table(self):
        with self.assertRaises(ValueError):
            HuffmanTable(DC_LUMINANCE_BITS, DC_LUMINANCE_VALUES[:-1])

    def test_sparse_blocks(self):
        rng = np.random.default_rng(9)
        blocks = np.zeros((40, 8, 8), dtype=np.int32)
        blocks[:, 0, 0] = rng.integers(-1016, 1017, 40)
        # long zero runs force ZRL symbols
        blocks[:, 7, 6] = rng.integers(-30, 31, 40)
        blocks[::3, 1, 0] = rng.integers(-1023, 1024, len(blocks[::3]))
        for codes in (LUMINANCE_CODES, CHROMINANCE_CODES):
            np.testing.assert_array_equal(decode_blocks(encode_blocks(blocks, codes), 40, codes), blocks)

    def test_large_ac_is_clipped(self):
        blocks = np.zeros((1, 8, 8), dtype=np.int32)
        blocks[0, 0, 1] = 5000
        decoded = decode_blocks(encode_blocks(blocks, LUMINANCE_CODES), 1, LUMINANCE_CODES)
        self.assertEqual(decoded[0, 0, 1], 1023)

    def test_truncated_stream(self):
        blocks = np.random.default_rng(1).integers(-50, 51, (10, 8, 8))
        data = encode_blocks(blocks, LUMINANCE_CODES)
        with self.assertRaises(DataError):
            decode_blocks(data[:len(data) // 3], 10, LUMINANCE_CODES)


if __name__ == '__main__':
    unittest.main()
