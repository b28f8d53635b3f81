"""Binary dataset exchange format with a JSON metadata sidecar, plus CSV import.

Layout (all little-endian)::

    offset  size  field
    0       4     magic  b"NBTS"
    4       2     version (u16) = 1
    6       1     dtype (u8): 0 = float32, 1 = float64
    7       4     channels (u32)
    11      8     n_series (u64)
    19      8     series_len (u64)
    27      5     reserved, zero
    32      ...   payload: series-major, then channel, then time

The sidecar sits next to the payload with the same basename and a ``.json``
suffix.
"""

from __future__ import annotations

import csv
import json
import struct
from pathlib import Path

import numpy as np

from .dataset import TimeSeriesDataset
from .errors import CorruptFileError, EmptyDatasetError, FormatError, ParseError
from .noise_models.specs import spec_from_dict, spec_to_dict

MAGIC = b"NBTS"
VERSION = 1
HEADER = struct.Struct("<4sHBIQQ5x")
assert HEADER.size == 32

_DTYPES = {0: np.dtype("<f4"), 1: np.dtype("<f8")}
_CODES = {"float32": 0, "float64": 1}


def sidecar_path(path) -> Path:
    return Path(path).with_suffix(".json")


def write_dataset(ds: TimeSeriesDataset, path, dtype: str = "float64", meta: dict | None = None) -> Path:
    """Write ``ds`` to ``path`` and its metadata to the sidecar."""
    path = Path(path)
    code = _CODES[dtype]
    values = ds.values if ds.values.ndim == 3 else ds.values[:, None, :]
    n, channels, length = values.shape
    header = HEADER.pack(MAGIC, VERSION, code, channels, n, length)
    payload = np.ascontiguousarray(values, dtype=_DTYPES[code])
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload.tobytes())

    doc = {
        "format": "NBTS",
        "version": VERSION,
        "dtype": dtype,
        "channels": channels,
        "n_series": n,
        "series_len": length,
        "spec": spec_to_dict(ds.spec) if ds.spec is not None else None,
        "master_seed": ds.master_seed,
        "provenance": ds.provenance,
        "params": ds.params,
    }
    if meta:
        doc.update(meta)
    sidecar_path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def read_header(raw: bytes) -> tuple[int, int, int, int]:
    if len(raw) < HEADER.size:
        raise CorruptFileError(f"file too short for the {HEADER.size}-byte header")
    magic, version, code, channels, n, length = HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise FormatError(f"unsupported format version {version}")
    if code not in _DTYPES:
        raise FormatError(f"unknown dtype code {code}")
    if raw[27:32] != b"\0" * 5:
        raise FormatError("reserved header bytes are not zero")
    return code, channels, n, length


def read_dataset(path) -> TimeSeriesDataset:
    """Read a dataset (float32 payloads are up-cast to float64)."""
    path = Path(path)
    raw = path.read_bytes()
    code, channels, n, length = read_header(raw)
    dt = _DTYPES[code]
    expected = n * channels * length * dt.itemsize
    got = len(raw) - HEADER.size
    if got != expected:
        raise CorruptFileError(f"payload has {got} bytes, header implies {expected}")
    values = np.frombuffer(raw, dtype=dt, offset=HEADER.size).astype(np.float64)
    values = values.reshape(n, channels, length)
    if channels == 1:
        values = values[:, 0, :]

    ds = TimeSeriesDataset(values=values)
    side = sidecar_path(path)
    if side.exists():
        doc = json.loads(side.read_text())
        if doc.get("spec"):
            ds.spec = spec_from_dict(doc["spec"])
        ds.master_seed = doc.get("master_seed")
        ds.provenance = doc.get("provenance", "")
        ds.params = doc.get("params", {}) or {}
    return ds


def read_csv_dataset(path) -> TimeSeriesDataset:
    """One series per row of a rectangular numeric CSV file."""
    rows = []
    width = None
    with open(path, newline="") as fh:
        for r, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ParseError(f"row {r} has {len(row)} columns, expected {width}")
            vals = []
            for c, cell in enumerate(row, start=1):
                try:
                    vals.append(float(cell))
                except ValueError:
                    raise ParseError(f"row {r}, column {c}: not a number: {cell!r}") from None
            rows.append(vals)
    if not rows:
        raise EmptyDatasetError(f"{path} contains no data")
    return TimeSeriesDataset(values=np.array(rows, dtype=np.float64), provenance=f"csv:{Path(path).name}")


def load_any(path) -> TimeSeriesDataset:
    """Dispatch on suffix: ``.csv`` goes through the CSV reader, anything else is NBTS."""
    if Path(path).suffix.lower() == ".csv":
        return read_csv_dataset(path)
    return read_dataset(path)
