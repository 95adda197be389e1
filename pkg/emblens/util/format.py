#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import os
import pathlib
import urllib.parse
from typing import Iterable, Optional


def format_file(file_path: str | pathlib.Path) -> str:
    """
    Format file path as file:// URI, escaping special characters like spaces.

    :param file_path: File path.
    :return: File path formatted as file:// URI.
    """
    abs_path = pathlib.Path(file_path).resolve()

    # On Windows, pathlib will produce a path like "C:\path\to\file"
    # We need to convert it to /C:/path/to/file for proper file:// URI
    if os.name == 'nt':
        uri_path = '/' + str(abs_path).replace('\\', '/')
    else:
        uri_path = str(abs_path)

    return f"file://{urllib.parse.quote(uri_path, safe='/')}"


def format_value(value: Optional[float]) -> str:
    """
    Format metric value for text/CSV reports.

    Uses `repr` so parsing the text back yields the exact float.

    :param value: Value, or None if not available.
    :return: Formatted value ("" for None).
    """
    if value is None:
        return ""
    return repr(float(value))


def format_flags(flags: Iterable[str]) -> str:
    """
    Format flags as a sorted, `|`-separated string.
    :param flags: Flags.
    :return: Formatted flags.
    """
    return "|".join(sorted(set(flags)))


def parse_int_list(text: str) -> list[int]:
    """
    Parse a comma-separated list of integers (e.g. "1,3").
    :param text: Text.
    :return: Integers.
    :raises ValueError: If an element is not an integer.
    """
    return [int(token.strip()) for token in text.split(",") if token.strip()]
