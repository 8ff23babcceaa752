import unittest

import numpy as np

from app.compression.StandardCodec import encode_standard, decode_standard, compress_image_standard
from tests.compression.codec_images import natural_image


class TestStandardCodec(unittest.TestCase):

    def test_baseline_jfif(self):
        stream = encode_standard(natural_image(1), 50)
        self.assertEqual(stream[:2], b"\xff\xd8")
        self.assertEqual(decode_standard(stream).shape, (44, 60, 3))

    def test_size_decreases_with_quality(self):
        img = natural_image(2)
        sizes = [len(compress_image_standard(img, q)[0]) for q in (100, 50, 25)]
        self.assertGreater(sizes[0], sizes[1])
        self.assertGreater(sizes[1], sizes[2])

    def test_optimize_never_grows(self):
        img = natural_image(3)
        self.assertLessEqual(len(encode_standard(img, 50, optimize=True)), len(encode_standard(img, 50)))

    def test_invalid_quality(self):
        with self.assertRaises(ValueError):
            encode_standard(np.zeros((8, 8, 3), dtype=np.uint8), 0)


if __name__ == '__main__':
    unittest.main()
