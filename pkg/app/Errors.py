#!/usr/bin/env python3


class MuzzleIdError(Exception):
    """Base class of every error raised by the toolkit."""


class ConfigError(MuzzleIdError):
    pass


class DataError(MuzzleIdError):
    """Corpus, manifest or image content cannot be used."""


class ManifestParseError(DataError):
    def __init__(self, path: str, field: str, reason: str):
        super().__init__("Malformed manifest %s [%s]: %s" % (path, field, reason))
        self.path = path
        self.field = field


class CheckpointError(MuzzleIdError):
    pass


class SpecMismatchError(CheckpointError):
    def __init__(self, stored, requested):
        super().__init__("Checkpoint spec mismatch:\n  checkpoint: %s\n  requested:  %s" % (stored, requested))
        self.stored = stored
        self.requested = requested


class LeakageError(MuzzleIdError):
    """Evaluation images found in the training stream."""
