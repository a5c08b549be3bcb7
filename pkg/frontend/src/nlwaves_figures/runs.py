"""Read-only access to solver run directories.

A run directory contains ``config.json``, ``snap_NNNN.bin`` snapshot files
listed in ``index.csv``, ``diagnostics.csv``, and ``summary.json``.  This
module implements the documented flat binary snapshot layout independently
of the solver package, so the renderer only needs the files on disk.

Snapshot layout (little-endian): int64 dims, int64 points[dims], float64
lengths[dims], float64 time, int64 is_complex, then the C-ordered field
values as float64 or complex128.
"""

from __future__ import annotations

import csv
import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class RunFormatError(ValueError):
    """Raised when a run directory or snapshot file is malformed."""


@dataclass(frozen=True)
class Snapshot:
    """One stored field: values on a uniform periodic grid at one time."""

    values: np.ndarray
    lengths: tuple
    time: float

    @property
    def dims(self):
        return self.values.ndim

    def axis(self, d=0):
        """Physical nodes along dimension d: x_i = -L/2 + i L/N."""
        n, length = self.values.shape[d], self.lengths[d]
        return -length / 2 + length * np.arange(n) / n


def read_snapshot(path):
    """Read one snapshot file."""
    raw = Path(path).read_bytes()
    try:
        (dims,) = struct.unpack_from("<q", raw, 0)
        if dims not in (1, 2):
            raise RunFormatError(f"{path}: bad dimension count {dims}")
        off = 8
        points = struct.unpack_from(f"<{dims}q", raw, off)
        off += 8 * dims
        lengths = struct.unpack_from(f"<{dims}d", raw, off)
        off += 8 * dims
        (time,) = struct.unpack_from("<d", raw, off)
        off += 8
        (is_complex,) = struct.unpack_from("<q", raw, off)
        off += 8
        count = int(np.prod(points))
        dtype = np.dtype("<c16" if is_complex else "<f8")
        if len(raw) - off != count * dtype.itemsize:
            raise RunFormatError(f"{path}: payload size does not match header")
        values = np.frombuffer(raw, dtype=dtype, count=count, offset=off)
    except struct.error as e:
        raise RunFormatError(f"{path}: truncated header ({e})")
    return Snapshot(values.reshape(points).copy(), tuple(lengths), float(time))


def write_snapshot(path, snapshot):
    """Write a Snapshot in the documented layout (used by tests/tools)."""
    vals = np.asarray(snapshot.values)
    is_complex = np.iscomplexobj(vals)
    with open(path, "wb") as fh:
        fh.write(struct.pack("<q", vals.ndim))
        fh.write(struct.pack(f"<{vals.ndim}q", *vals.shape))
        fh.write(struct.pack(f"<{vals.ndim}d", *snapshot.lengths))
        fh.write(struct.pack("<d", float(snapshot.time)))
        fh.write(struct.pack("<q", int(is_complex)))
        fh.write(vals.astype("<c16" if is_complex else "<f8").tobytes(order="C"))


@dataclass(frozen=True)
class RunDir:
    """Loaded run directory: config dict, snapshots, diagnostics rows."""

    path: Path
    config: dict
    snapshots: list  # of Snapshot, in index order
    diagnostics: list  # of dicts with float values ('' -> nan)

    @property
    def name(self):
        return self.config.get("name", self.path.name)

    @property
    def times(self):
        return [s.time for s in self.snapshots]


def load_run(run_dir):
    """Load a run directory without modifying it."""
    run_dir = Path(run_dir)
    cfg_path = run_dir / "config.json"
    idx_path = run_dir / "index.csv"
    if not idx_path.is_file():
        raise RunFormatError(f"{run_dir}: no index.csv (not a run directory?)")
    config = json.loads(cfg_path.read_text()) if cfg_path.is_file() else {}

    snapshots, missing = [], []
    with open(idx_path) as fh:
        for row in csv.DictReader(fh):
            p = run_dir / row["file"]
            if not p.is_file():
                missing.append(row["file"])
                continue
            snapshots.append(read_snapshot(p))
    if missing:
        raise RunFormatError(
            f"{run_dir}: snapshots listed in index.csv are missing: "
            + ", ".join(missing)
        )

    diagnostics = []
    diag_path = run_dir / "diagnostics.csv"
    if diag_path.is_file():
        with open(diag_path) as fh:
            for row in csv.DictReader(fh):
                diagnostics.append(
                    {k: (float(v) if v != "" else np.nan) for k, v in row.items()}
                )
    return RunDir(run_dir, config, snapshots, diagnostics)
