"""IMGF binary image-feature files.

Layout (little-endian): magic b"IMGF", u32 version=1, u32 n, u32 d, then
n*d float32 values, row-major. Row order aligns line-by-line with the
parallel text files.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ..errors import DataError

MAGIC = b"IMGF"
VERSION = 1
_HEADER = struct.Struct("<4sIII")


def write_features(path: str | Path, features: np.ndarray) -> None:
    """Write an (n, d) float array as an IMGF file (stored as float32)."""
    arr = np.ascontiguousarray(features, dtype=np.float32)
    if arr.ndim != 2:
        raise DataError(f"features must be 2-D (n, d), got shape {arr.shape}")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, arr.shape[0], arr.shape[1]))
        fh.write(arr.astype("<f4").tobytes())


def load_features(path: str | Path) -> np.ndarray:
    """Read an IMGF file into an (n, d) float32 array.

    Distinct errors for bad magic, truncated payloads, and non-finite values.
    """
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise DataError(f"{path}: truncated IMGF header")
    magic, version, n, d = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise DataError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise DataError(f"{path}: unsupported IMGF version {version}")
    expected = _HEADER.size + 4 * n * d
    if len(raw) < expected:
        raise DataError(f"{path}: truncated IMGF payload ({len(raw)} bytes, need {expected})")
    if len(raw) > expected:
        raise DataError(f"{path}: trailing bytes after IMGF payload")
    arr = np.frombuffer(raw, dtype="<f4", offset=_HEADER.size).reshape(n, d)
    if not np.isfinite(arr).all():
        raise DataError(f"{path}: non-finite values in IMGF payload")
    return arr.copy()
