"""Binary snapshot format: layout and round-trip."""

import struct

import numpy as np
import pytest

from rossby_lab.errors import DataError
from rossby_lab.fields import Grid2
from rossby_lab.snapshot import read_snapshot, write_snapshot


def test_roundtrip(tmp_path, grid32, rng):
    a = rng.standard_normal(grid32.shape)
    b = rng.standard_normal(grid32.shape)
    path = tmp_path / "state.rlab"
    write_snapshot(path, grid32, {"rho": a, "m1": b})
    grid, fields = read_snapshot(path)
    assert grid == grid32
    assert list(fields) == ["rho", "m1"]
    assert np.array_equal(fields["rho"].values, a)
    assert np.array_equal(fields["m1"].values, b)


def test_header_layout(tmp_path, grid32):
    path = tmp_path / "one.rlab"
    write_snapshot(path, grid32, {"q": np.zeros(grid32.shape)})
    raw = path.read_bytes()
    assert raw[:4] == b"RLAB"
    version, n, length, nfields = struct.unpack_from("<IIdI", raw, 4)
    assert (version, n, nfields) == (1, 32, 1)
    assert length == grid32.length
    name = raw[24:40]
    assert name == b"q" + b"\x00" * 15
    assert len(raw) == 40 + 32 * 32 * 8


def test_rejects_bad_magic(tmp_path):
    path = tmp_path / "bad.rlab"
    path.write_bytes(b"NOPE" + b"\x00" * 64)
    with pytest.raises(DataError):
        read_snapshot(path)


def test_rejects_long_name(tmp_path, grid32):
    with pytest.raises(DataError):
        write_snapshot(
            tmp_path / "x.rlab", grid32, {"a_very_long_field_name": np.zeros(grid32.shape)}
        )


def test_rejects_wrong_shape(tmp_path, grid32):
    with pytest.raises(DataError):
        write_snapshot(tmp_path / "y.rlab", grid32, {"q": np.zeros((8, 8))})
