import json
import struct

import numpy as np
import pytest

from noisebench.dataset import TimeSeriesDataset
from noisebench.dataset_io import HEADER, load_any, read_csv_dataset, read_dataset, sidecar_path, write_dataset
from noisebench.errors import CorruptFileError, EmptyDatasetError, FormatError, InvalidInputError, ParseError
from noisebench.noise_models import Shot, simulate_dataset


def test_header_is_32_bytes():
    assert HEADER.size == 32


def test_round_trip_bitwise_with_sidecar(tmp_path):
    ds = simulate_dataset(Shot(1.0, pulse="gaussian"), 16, 4096, master_seed=3)
    path = write_dataset(ds, tmp_path / "d.nbts")
    back = read_dataset(path)
    assert back.values.tobytes() == ds.values.tobytes()
    assert back.spec == ds.spec and back.master_seed == 3
    doc = json.loads(sidecar_path(path).read_text())
    assert doc["n_series"] == 16 and doc["spec"]["pulse"] == "gaussian"


def test_large_round_trip(tmp_path):
    x = np.random.default_rng(0).standard_normal((4096, 4096))
    path = write_dataset(TimeSeriesDataset(values=x), tmp_path / "big.nbts")
    assert np.array_equal(read_dataset(path).values, x)


def test_float32_and_multichannel(tmp_path):
    x = np.arange(2 * 3 * 5, dtype=float).reshape(2, 3, 5)
    path = write_dataset(TimeSeriesDataset(values=x), tmp_path / "m.nbts", dtype="float32")
    back = read_dataset(path)
    assert back.values.dtype == np.float64 and back.values.shape == (2, 3, 5)
    np.testing.assert_array_equal(back.values, x)


def test_empty_dataset_round_trip(tmp_path):
    path = write_dataset(TimeSeriesDataset(values=np.zeros((0, 8))), tmp_path / "e.nbts")
    assert read_dataset(path).values.shape == (0, 8)


def test_bad_magic(tmp_path):
    path = write_dataset(TimeSeriesDataset(values=np.ones((2, 4))), tmp_path / "x.nbts")
    raw = bytearray(path.read_bytes())
    raw[:4] = b"XXXX"
    path.write_bytes(bytes(raw))
    with pytest.raises(FormatError):
        read_dataset(path)


def test_truncated_payload(tmp_path):
    path = write_dataset(TimeSeriesDataset(values=np.ones((10, 4))), tmp_path / "t.nbts")
    raw = path.read_bytes()
    path.write_bytes(raw[: HEADER.size + 9 * 4 * 8])
    with pytest.raises(CorruptFileError):
        read_dataset(path)
    path.write_bytes(raw[:10])
    with pytest.raises(CorruptFileError):
        read_dataset(path)


def test_bad_version_dtype_reserved(tmp_path):
    good = HEADER.pack(b"NBTS", 1, 1, 1, 1, 1) + struct.pack("<d", 1.0)
    for offset, value in ((4, 9), (6, 7), (30, 1)):
        raw = bytearray(good)
        raw[offset] = value
        p = tmp_path / f"b{offset}.nbts"
        p.write_bytes(bytes(raw))
        with pytest.raises(FormatError):
            read_dataset(p)


def test_csv_import(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("\n".join(",".join(str(i * 8 + j) for j in range(8)) for i in range(2)) + "\n")
    ds = load_any(p)
    assert ds.values.shape == (2, 8)
    assert ds.values[1, 7] == 15


def test_csv_errors(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("1,2,3\n4,five,6\n")
    with pytest.raises(ParseError, match="row 2, column 2"):
        read_csv_dataset(p)
    p.write_text("1,2,3\n4,5\n")
    with pytest.raises(ParseError):
        read_csv_dataset(p)
    p.write_text("")
    with pytest.raises(EmptyDatasetError):
        read_csv_dataset(p)


def test_dataset_container_checks():
    with pytest.raises(InvalidInputError):
        TimeSeriesDataset(values=np.ones(5))
    ds = TimeSeriesDataset(values=np.ones((2, 3, 4)))
    assert (ds.n_series, ds.channels, ds.series_len) == (2, 3, 4)
    with pytest.raises(InvalidInputError):
        ds.series()
