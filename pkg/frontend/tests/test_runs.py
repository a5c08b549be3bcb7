"""Snapshot reader round trips and run-directory loading."""

import csv
import json
import struct
from pathlib import Path

import numpy as np
import pytest

from nlwaves_figures.runs import (
    RunFormatError,
    Snapshot,
    load_run,
    read_snapshot,
    write_snapshot,
)

DATA = Path(__file__).parent / "data"


class TestSnapshotFormat:
    def test_reference_1d(self):
        # fixed corpus file written by hand in the documented layout
        s = read_snapshot(DATA / "reference_1d.bin")
        assert s.dims == 1
        assert s.values.shape == (16,)
        assert s.lengths == (8.0,)
        assert s.time == 0.75
        x = s.axis(0)
        assert np.allclose(s.values, np.cos(2 * np.pi * x / 8.0), atol=1e-15)
        assert s.values.dtype.kind == "f"

    def test_reference_2d_complex(self):
        s = read_snapshot(DATA / "reference_2d.bin")
        assert s.dims == 2
        assert s.values.shape == (8, 12)
        assert s.lengths == (2.0, 3.0)
        assert s.time == 1.5
        assert np.iscomplexobj(s.values)
        rng = np.random.default_rng(42)
        v = rng.standard_normal((8, 12)) + 1j * rng.standard_normal((8, 12))
        assert np.array_equal(s.values, v)

    def test_round_trip_reference(self, tmp_path):
        # write(read(file)) reproduces the reference bytes exactly
        for name in ("reference_1d.bin", "reference_2d.bin"):
            s = read_snapshot(DATA / name)
            out = tmp_path / name
            write_snapshot(out, s)
            assert out.read_bytes() == (DATA / name).read_bytes()

    def test_round_trip_random(self, tmp_path):
        rng = np.random.default_rng(0)
        for vals, lengths in [
            (rng.standard_normal(32), (5.0,)),
            (rng.standard_normal((16, 8)) * 1j + rng.standard_normal((16, 8)),
             (2.5, 7.0)),
        ]:
            p = tmp_path / "s.bin"
            write_snapshot(p, Snapshot(vals, lengths, 3.25))
            back = read_snapshot(p)
            assert np.array_equal(back.values, vals)
            assert back.lengths == lengths
            assert back.time == 3.25

    def test_truncated_file_rejected(self, tmp_path):
        p = tmp_path / "bad.bin"
        p.write_bytes(struct.pack("<q", 1) + struct.pack("<q", 16))
        with pytest.raises(RunFormatError):
            read_snapshot(p)

    def test_size_mismatch_rejected(self, tmp_path):
        p = tmp_path / "bad.bin"
        write_snapshot(p, Snapshot(np.zeros(16), (1.0,), 0.0))
        p.write_bytes(p.read_bytes()[:-8])
        with pytest.raises(RunFormatError):
            read_snapshot(p)

    def test_axis_convention(self):
        s = Snapshot(np.zeros(8), (4.0,), 0.0)
        assert np.allclose(s.axis(0), -2.0 + 0.5 * np.arange(8))


def make_run_dir(root, n_snaps=3):
    root.mkdir(parents=True, exist_ok=True)
    (root / "config.json").write_text(json.dumps({"name": "toy"}))
    rows = []
    for i in range(n_snaps):
        t = 0.5 * i
        x = -5 + 10 * np.arange(64) / 64
        u = np.exp(-((x - t) ** 2))
        write_snapshot(root / f"snap_{i:04d}.bin", Snapshot(u, (10.0,), t))
        rows.append({"file": f"snap_{i:04d}.bin", "time": repr(t), "complex": 0})
    with open(root / "index.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, ["file", "time", "complex"])
        w.writeheader()
        w.writerows(rows)
    with open(root / "diagnostics.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, ["t", "sup", "mass"])
        w.writeheader()
        for i in range(1, 9):
            w.writerow({"t": 0.25 * i, "sup": (0.25 * i) ** -1.0, "mass": 1.0})
    return root


class TestLoadRun:
    def test_loads_everything(self, tmp_path):
        run = load_run(make_run_dir(tmp_path / "toy"))
        assert run.name == "toy"
        assert len(run.snapshots) == 3
        assert run.times == [0.0, 0.5, 1.0]
        assert len(run.diagnostics) == 8
        assert run.diagnostics[0]["mass"] == 1.0

    def test_missing_snapshot_listed(self, tmp_path):
        root = make_run_dir(tmp_path / "toy")
        (root / "snap_0001.bin").unlink()
        with pytest.raises(RunFormatError, match="snap_0001.bin"):
            load_run(root)

    def test_not_a_run_dir(self, tmp_path):
        with pytest.raises(RunFormatError, match="index.csv"):
            load_run(tmp_path)
