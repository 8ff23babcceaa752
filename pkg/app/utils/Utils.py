#!/usr/bin/env python3

import re
import unicodedata


def normalize_string(string: str, sep: str = " "):
    """
    Normalize a label by putting the label in lower case, then replace any accentuated char by is equivalent without
    any accent. All exotics chars will be replaced by the separator.
    :param string: The label to normalize.
    :param sep: The separator which will replace exotics chars. By default it will be an empty char.
    :return: The normalized string.
    """
    str_lower = string.lower()
    str_normalized = unicodedata.normalize('NFKD', str_lower).encode('ASCII', 'ignore')
    str_slugified = str(str_normalized, 'utf-8')
    # underscores are kept as word separators too
    str_slugified = re.sub(r"[\W_]", " ", str_slugified)
    str_slugified = re.sub("[ ]{2,}", " ", str_slugified)
    if sep != " ":
        str_slugified = str_slugified.replace(" ", sep)
    return str_slugified.strip(sep)


def format_bytes(size: int) -> str:
    """Human readable size in the decimal units used by the results tables (622MB, 76MB...)."""
    value = float(size)
    for unit in ("B", "KB", "MB"):
        if round(value) < 1000:
            return "%d%s" % (round(value), unit)
        value = value / 1000.0
    return "%d%s" % (round(value), "GB")


def format_duration(seconds: float) -> str:
    """Formats a wall-clock duration as '1 hr 12 min', '53 min' or '25 s'."""
    seconds = max(0.0, float(seconds))
    if seconds < 60:
        return "%d s" % round(seconds)
    minutes = int(round(seconds / 60.0))
    hours, minutes = divmod(minutes, 60)
    if hours:
        return "%d hr %d min" % (hours, minutes)
    return "%d min" % minutes
