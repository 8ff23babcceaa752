#!/usr/bin/env python3
import logging

from PIL import Image

from ..dataset.ImageRecord import ImageRecord
from ..utils.ImageIO import read_rgb

DEFAULT_THUMBNAIL_SIZE = 150

_logger = logging.getLogger(__name__)


def write_preview(originals: list[ImageRecord], path_map: dict, out_path: str,
                  thumbnail: int = DEFAULT_THUMBNAIL_SIZE) -> str:
    """Montage with the originals on the top row and their compressed copies below."""
    if not originals:
        raise ValueError("No image to preview")
    sheet = Image.new("RGB", (thumbnail * len(originals), thumbnail * 2), "white")
    for i, record in enumerate(originals):
        for row, path in enumerate((record.path, path_map[record.path].path)):
            tile = Image.fromarray(read_rgb(path)).resize((thumbnail, thumbnail), Image.Resampling.BILINEAR)
            sheet.paste(tile, (i * thumbnail, row * thumbnail))
    sheet.save(out_path)
    _logger.info("Preview of %d images written to %s", len(originals), out_path)
    return out_path
