#!/usr/bin/env python3
import io

import numpy as np
from PIL import Image

from .Quantization import QualityLevel

JPEG_EXTENSION = ".jpg"


def encode_standard(rgb: np.ndarray, q: int, optimize: bool = False) -> bytes:
    """Baseline JFIF through Pillow's save-time quality knob (libjpeg tables, 4:2:0)."""
    q = QualityLevel(q)
    buffer = io.BytesIO()
    Image.fromarray(np.ascontiguousarray(rgb, dtype=np.uint8)).save(buffer, format="JPEG", quality=int(q),
                                                                     optimize=optimize)
    return buffer.getvalue()


def decode_standard(stream: bytes) -> np.ndarray:
    with Image.open(io.BytesIO(stream)) as img:
        return np.asarray(img.convert("RGB"))


def compress_image_standard(rgb: np.ndarray, q: int, optimize: bool = False) -> tuple[bytes, np.ndarray]:
    stream = encode_standard(rgb, q, optimize)
    return stream, decode_standard(stream)
