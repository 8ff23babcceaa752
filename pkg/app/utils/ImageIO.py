#!/usr/bin/env python3
import numpy as np
import torch
from PIL import Image, UnidentifiedImageError

from ..Errors import DataError
from ..compression.ReferenceCodec import decode_reference, MZDC_EXTENSION
from .PixelTensor import to_tensor


def read_rgb(path: str) -> np.ndarray:
    """Decodes an image file (jpeg, png or reference-codec stream) to a HxWx3 uint8 array."""
    try:
        if str(path).endswith(MZDC_EXTENSION):
            with open(path, 'rb') as fp:
                return decode_reference(fp.read())
        with Image.open(path) as img:
            return np.asarray(img.convert("RGB"))
    except (OSError, UnidentifiedImageError, ValueError) as e:
        raise DataError("Unable to decode image %s: %s" % (path, e)) from e


def load_image(path: str) -> torch.Tensor:
    return to_tensor(read_rgb(path))
