"""Binary field snapshots.

Layout (little-endian):
    magic   4 bytes  b"RLAB"
    version u32      currently 1
    n       u32      points per axis
    L       f64      physical side length
    nfields u32
    names   nfields * 16 bytes, ASCII, NUL-padded
    data    nfields * n*n f64, row-major per field
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import DataError
from .fields import Grid2, ScalarField

__all__ = ["write_snapshot", "read_snapshot", "SNAPSHOT_MAGIC", "SNAPSHOT_VERSION"]

SNAPSHOT_MAGIC = b"RLAB"
SNAPSHOT_VERSION = 1
_NAME_LEN = 16


def _encode_name(name: str) -> bytes:
    raw = name.encode("ascii")
    if len(raw) > _NAME_LEN:
        raise DataError(f"field name {name!r} exceeds {_NAME_LEN} ASCII bytes")
    return raw.ljust(_NAME_LEN, b"\x00")


def write_snapshot(path, grid: Grid2, named_fields: dict[str, np.ndarray]) -> None:
    """Write named (n, n) float64 arrays in the snapshot format."""
    path = Path(path)
    with path.open("wb") as fh:
        fh.write(SNAPSHOT_MAGIC)
        fh.write(struct.pack("<IIdI", SNAPSHOT_VERSION, grid.n, grid.length, len(named_fields)))
        for name in named_fields:
            fh.write(_encode_name(name))
        for name, values in named_fields.items():
            arr = np.ascontiguousarray(values, dtype=np.float64)
            if arr.shape != grid.shape:
                raise DataError(f"field {name!r} has shape {arr.shape}, grid is {grid.shape}")
            fh.write(arr.astype("<f8", copy=False).tobytes(order="C"))


def read_snapshot(path) -> tuple[Grid2, dict[str, ScalarField]]:
    """Read a snapshot file back into fields on a reconstructed grid."""
    raw = Path(path).read_bytes()
    if raw[:4] != SNAPSHOT_MAGIC:
        raise DataError(f"{path}: bad magic {raw[:4]!r}")
    version, n, length, nfields = struct.unpack_from("<IIdI", raw, 4)
    if version != SNAPSHOT_VERSION:
        raise DataError(f"{path}: unsupported snapshot version {version}")
    grid = Grid2(n=n, length=length)
    off = 4 + struct.calcsize("<IIdI")
    names = []
    for _ in range(nfields):
        names.append(raw[off : off + _NAME_LEN].rstrip(b"\x00").decode("ascii"))
        off += _NAME_LEN
    out: dict[str, ScalarField] = {}
    count = n * n
    for name in names:
        vals = np.frombuffer(raw, dtype="<f8", count=count, offset=off).reshape(n, n)
        off += count * 8
        out[name] = ScalarField(grid, vals.copy())
    if off != len(raw):
        raise DataError(f"{path}: trailing bytes after field data")
    return grid, out
