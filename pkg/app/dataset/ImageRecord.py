#!/usr/bin/env python3
from dataclasses import dataclass, asdict

IMAGE_EXTENSIONS = (".jpg", ".jpeg", ".png")
RECORD_FIELDS = ("path", "class_id", "width", "height", "byte_size")


@dataclass(frozen=True)
class ImageRecord:
    path: str
    class_id: str
    width: int
    height: int
    byte_size: int

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("Invalid image dimensions %dx%d for %s" % (self.width, self.height, self.path))

    def to_dict(self) -> dict:
        return asdict(self)

    @staticmethod
    def from_dict(data: dict) -> "ImageRecord":
        return ImageRecord(str(data["path"]), str(data["class_id"]),
                           int(data["width"]), int(data["height"]), int(data["byte_size"]))
