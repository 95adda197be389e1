#  Copyright © 2026 Emblens contributors
#  This file is part of Emblens. See LICENSE for details.

import logging
import struct
from pathlib import Path

import numpy as np

from emblens.data.EmbeddingSet import EmbeddingSet
from emblens.data.Partition import Partition
from emblens.util.errors import FormatError
from emblens.util.format import format_file

logger = logging.getLogger(__name__)

MAGIC = b"EMBV1\n"

# dtype code -> little-endian numpy dtype
DTYPE_CODES = {
    0: np.dtype("<f4"),
    1: np.dtype("<f8"),
}

HEADER = struct.Struct("<BII")

HEADER_SIZE = len(MAGIC) + HEADER.size

CSV_SUFFIXES = (".csv", ".txt")


def is_csv(path: str | Path) -> bool:
    return Path(path).suffix.lower() in CSV_SUFFIXES


def load_embeddings(path: str | Path, milestone_id: str = "") -> EmbeddingSet:
    """
    Load embeddings from the binary format (or CSV, by file suffix).
    :param path: File path.
    :param milestone_id: Milestone id attached to the result.
    :return: Embedding set.
    :raises FormatError: If the file is malformed or holds non-finite values.
    """
    path = Path(path)
    if is_csv(path):
        return load_embeddings_csv(path, milestone_id)

    try:
        blob = path.read_bytes()
    except OSError as e:
        raise FormatError(f"Failed to read {format_file(path)}: {e}")

    if len(blob) < HEADER_SIZE or not blob.startswith(MAGIC):
        raise FormatError(f"Malformed header in {format_file(path)}: missing magic {MAGIC!r}")

    code, n, d = HEADER.unpack_from(blob, len(MAGIC))
    if code not in DTYPE_CODES:
        raise FormatError(f"Malformed header in {format_file(path)}: unknown dtype code ({code})")

    dtype = DTYPE_CODES[code]
    payload = blob[HEADER_SIZE:]
    expected = n * d * dtype.itemsize
    if len(payload) != expected:
        raise FormatError(
            f"Dimension mismatch in {format_file(path)}: header declares ({n}) x ({d}) "
            f"= ({expected}) bytes, payload has ({len(payload)}) bytes"
        )

    values = np.frombuffer(payload, dtype=dtype).reshape(n, d).astype(dtype.newbyteorder("="))

    try:
        embeddings = EmbeddingSet(values=values, milestone_id=milestone_id)
    except FormatError as e:
        raise FormatError(f"{format_file(path)}: {e}")

    logger.debug(f"Loaded ({n}) x ({d}) embeddings from {format_file(path)}")
    return embeddings


def load_embeddings_csv(path: Path, milestone_id: str = "") -> EmbeddingSet:
    """
    Load embeddings from headerless CSV, d comma-separated decimals per line.
    :param path: File path.
    :param milestone_id: Milestone id.
    :return: Embedding set (64-bit).
    :raises FormatError: If rows are ragged or not numeric.
    """
    rows = []
    try:
        with open(path, "r", encoding="utf-8") as f:
            for line_index, line in enumerate(f):
                line = line.strip()
                if not line:
                    continue
                try:
                    rows.append([float(token) for token in line.split(",")])
                except ValueError:
                    raise FormatError(f"Non-numeric value in {format_file(path)} line ({line_index + 1})")
                if len(rows[-1]) != len(rows[0]):
                    raise FormatError(
                        f"Dimension mismatch in {format_file(path)} line ({line_index + 1}): "
                        f"({len(rows[-1])}) values, expected ({len(rows[0])})"
                    )
    except OSError as e:
        raise FormatError(f"Failed to read {format_file(path)}: {e}")

    if not rows:
        raise FormatError(f"No rows in {format_file(path)}")

    try:
        return EmbeddingSet(values=np.array(rows, dtype=np.float64), milestone_id=milestone_id)
    except FormatError as e:
        raise FormatError(f"{format_file(path)}: {e}")


def embeddings_to_bytes(e: EmbeddingSet) -> bytes:
    """
    Serialize embeddings to the binary format.
    :param e: Embedding set.
    :return: Bytes.
    """
    code = 0 if e.values.dtype == np.float32 else 1
    dtype = DTYPE_CODES[code]
    return MAGIC + HEADER.pack(code, e.n, e.d) + np.ascontiguousarray(e.values, dtype=dtype).tobytes()


def save_embeddings(e: EmbeddingSet, path: str | Path) -> None:
    """
    Save embeddings (binary, or CSV by file suffix).
    :param e: Embedding set.
    :param path: File path.
    :raises OSError: If the destination is not writable.
    """
    path = Path(path)
    if is_csv(path):
        lines = [",".join(repr(float(x)) for x in row) for row in e.values]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        path.write_bytes(embeddings_to_bytes(e))

    logger.debug(f"Saved ({e.n}) x ({e.d}) embeddings to {format_file(path)}")


def load_partition(path: str | Path, n_expected: int | None = None) -> Partition:
    """
    Load partition, one base-10 integer label per line.
    :param path: File path.
    :param n_expected: Expected sample count (checked if given).
    :return: Partition with k = max label + 1.
    :raises FormatError: If a line is not an integer, a label is negative, or the length mismatches.
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except (OSError, UnicodeDecodeError) as e:
        raise FormatError(f"Failed to read {format_file(path)}: {e}")

    labels = []
    for line_index, line in enumerate(lines):
        token = line.strip()
        if token == "":
            continue
        try:
            label = int(token, 10)
        except ValueError:
            raise FormatError(f"Non-integer label '{token}' in {format_file(path)} line ({line_index + 1})")
        if label < 0:
            raise FormatError(f"Negative label ({label}) in {format_file(path)} line ({line_index + 1})")
        labels.append(label)

    if not labels:
        raise FormatError(f"No labels in {format_file(path)}")

    if n_expected is not None and len(labels) != n_expected:
        raise FormatError(
            f"Length mismatch in {format_file(path)}: ({len(labels)}) labels, expected ({n_expected})"
        )

    return Partition.from_labels(labels)


def save_partition(p: Partition, path: str | Path) -> None:
    """
    Save partition, one label per line, LF-terminated.
    :param p: Partition.
    :param path: File path.
    """
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("".join(f"{int(label)}\n" for label in p.assignments))
