#!/usr/bin/env python3
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

from PIL import Image, UnidentifiedImageError

from ..Errors import DataError
from .DatasetManifest import DatasetManifest
from .ImageRecord import ImageRecord, IMAGE_EXTENSIONS

DEFAULT_SCAN_WORKERS = 4


class CorpusScanner:
    """Catalogs a `<root>/<class_id>/<image>` corpus into a DatasetManifest."""

    def __init__(self, root: str, workers: int = DEFAULT_SCAN_WORKERS):
        self._logger = logging.getLogger(__name__)
        self._root = root
        self._workers = max(1, workers)
        self.skipped = []

    def _class_dirs(self) -> list[str]:
        if not os.path.isdir(self._root):
            raise DataError("Corpus root %s does not exist" % self._root)
        names = sorted(e.name for e in os.scandir(self._root) if e.is_dir() and not e.name.startswith("."))
        if not names:
            raise DataError("no class directories in %s" % self._root)
        return names

    def _image_files(self, class_id: str) -> list[str]:
        class_dir = os.path.join(self._root, class_id)
        return sorted(os.path.join(class_dir, f) for f in os.listdir(class_dir)
                      if f.lower().endswith(IMAGE_EXTENSIONS) and os.path.isfile(os.path.join(class_dir, f)))

    def _read_record(self, path: str, class_id: str) -> Optional[ImageRecord]:
        try:
            with Image.open(path) as img:
                img.load()
                width, height = img.size
            return ImageRecord(path, class_id, width, height, os.path.getsize(path))
        except (OSError, UnidentifiedImageError, ValueError) as e:
            self._logger.warning("Skipping undecodable image %s: %s", path, e)
            self.skipped.append(path)
            return None

    def scan(self) -> DatasetManifest:
        classes = self._class_dirs()
        jobs = [(path, c) for c in classes for path in self._image_files(c)]
        self._logger.info("Scanning %d files in %d class directories of %s", len(jobs), len(classes), self._root)
        with ThreadPoolExecutor(max_workers=self._workers) as pool:
            results = list(pool.map(lambda job: self._read_record(*job), jobs))
        records = tuple(r for r in results if r is not None)
        manifest = DatasetManifest(records, tuple(classes)).validate()
        self._logger.info("Manifest: %d classes, %d records, %d skipped",
                          len(manifest.classes), len(records), len(self.skipped))
        return manifest


def scan_corpus(root: str, workers: int = DEFAULT_SCAN_WORKERS) -> DatasetManifest:
    return CorpusScanner(root, workers).scan()
