"""Experiment configuration, deterministic run directories, and snapshot I/O.

A configuration is a plain JSON document; a run directory contains

- ``config.json``     the exact configuration that produced the run
- ``snap_NNNN.bin``    binary snapshots (layout below)
- ``index.csv``        snapshot index: file name, time, real/complex
- ``diagnostics.csv``  monitor time series (one labeled column per monitor)
- ``summary.json``     final-state facts: conservation drift, blow-up flag,
  sup norms, and any fits the caller attached

Snapshot binary layout (all little-endian):

    int64   dims                  (1 or 2)
    int64   n[dims]               points per dimension
    float64 L[dims]               period per dimension
    float64 time
    int64   is_complex            (0 or 1)
    float64 data[...]             C-order samples; complex data interleaves
                                  (re, im) pairs, doubling the count

Reruns of the same configuration are byte-identical: evaluation order is
fixed and no wall-clock content enters any data file.
"""

from __future__ import annotations

import csv
import io
import json
import struct
from dataclasses import asdict, dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .equations import EquationSpec
from .grid import ConfigurationError, Field, Grid
from .integrators import IntegratorConfig


@dataclass(frozen=True)
class ExperimentConfig:
    """Complete, serializable description of one simulation run."""

    name: str
    equation: dict
    grid: dict
    initial: dict
    integrator: dict
    diagnostics_stride: int = 1
    outputs: dict = dc_field(default_factory=dict)
    seed: int = 0
    description: str = ""

    def equation_spec(self):
        eq = dict(self.equation)
        if "r" in eq:
            eq["r"] = Fraction(eq["r"])
        return EquationSpec(**eq)

    def make_grid(self):
        return Grid(tuple(self.grid["points"]), tuple(self.grid["lengths"]))

    def integrator_config(self):
        kw = dict(self.integrator)
        kw.setdefault("diagnostics_stride", self.diagnostics_stride)
        return IntegratorConfig(**kw)

    def to_json(self):
        d = asdict(self)
        d["equation"] = dict(d["equation"])
        if "r" in d["equation"]:
            d["equation"]["r"] = str(d["equation"]["r"])
        return json.dumps(d, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        return cls(**d)


def validate(config):
    """Return a list of problems (empty when the config is runnable)."""
    problems = []
    try:
        spec = config.equation_spec()
    except Exception as e:  # noqa: BLE001 - report, do not crash
        problems.append(f"equation: {e}")
        spec = None
    try:
        grid = config.make_grid()
    except Exception as e:
        problems.append(f"grid: {e}")
        grid = None
    if spec is not None and grid is not None and spec.dims != grid.dims:
        problems.append(
            f"grid is {grid.dims}D but model {spec.model} needs {spec.dims}D"
        )
    try:
        config.integrator_config()
    except Exception as e:
        problems.append(f"integrator: {e}")
    try:
        if grid is not None:
            build_initial(config, grid)
    except Exception as e:
        problems.append(f"initial data: {e}")
    return problems


def build_initial(config, grid=None):
    """Construct the initial Field from the config's `initial` block.

    Two forms are supported: a catalog reference
    ``{"catalog": "<generator>", "params": {...}, "scale": s}`` (generators
    are the public callables of :mod:`nlwaves.solutions`), and a closed-form
    expression ``{"expression": "5*sech(x)**2"}`` evaluated with numpy
    functions plus the grid coordinates x (and y in 2D).  A list under
    ``"sum"`` adds several such blocks.
    """
    from . import solutions

    grid = grid or config.make_grid()
    init = config.initial

    def build_one(block):
        if "catalog" in block:
            fn = getattr(solutions, block["catalog"])
            params = dict(block.get("params", {}))
            if "z0" in params and isinstance(params["z0"], list):
                params["z0"] = complex(*params["z0"])
            t0 = params.pop("t", 0.0)
            out = solutions.sample(grid, fn, t=t0, **params)
            return out.values * block.get("scale", 1.0)
        if "expression" in block:
            names = {
                "np": np,
                "pi": np.pi,
                "sech": lambda z: 1 / np.cosh(z),
                "sqrt": np.sqrt,
                "exp": np.exp,
                "cos": np.cos,
                "sin": np.sin,
                "tanh": np.tanh,
                "cosh": np.cosh,
            }
            coords = grid.meshgrid()
            names["x"] = coords[0]
            if grid.dims == 2:
                names["y"] = coords[1]
            vals = eval(block["expression"], {"__builtins__": {}}, names)  # noqa: S307
            return np.broadcast_to(np.asarray(vals), grid.shape) * block.get(
                "scale", 1.0
            )
        if "zero" in block:
            return np.zeros(grid.shape)
        raise ConfigurationError(f"unrecognized initial block {block}")

    blocks = init["sum"] if "sum" in init else [init]
    vals = sum(build_one(b) for b in blocks)
    spec = config.equation_spec()
    if spec.is_complex:
        vals = np.asarray(vals, complex)
    else:
        vals = np.asarray(vals, float).real
    return Field(grid, vals)


# ---------------------------------------------------------------------------
# snapshot binary format

def write_snapshot(path, field, time):
    """Write one Field in the documented flat binary layout."""
    g = field.grid
    vals = np.asarray(field.values)
    is_complex = np.iscomplexobj(vals)
    with open(path, "wb") as fh:
        fh.write(struct.pack("<q", g.dims))
        fh.write(struct.pack(f"<{g.dims}q", *g.points))
        fh.write(struct.pack(f"<{g.dims}d", *g.lengths))
        fh.write(struct.pack("<d", float(time)))
        fh.write(struct.pack("<q", int(is_complex)))
        data = vals.astype("<c16" if is_complex else "<f8")
        fh.write(data.tobytes(order="C"))


def read_snapshot(path):
    """Read a snapshot file; returns (Field, time)."""
    with open(path, "rb") as fh:
        (dims,) = struct.unpack("<q", fh.read(8))
        points = struct.unpack(f"<{dims}q", fh.read(8 * dims))
        lengths = struct.unpack(f"<{dims}d", fh.read(8 * dims))
        (time,) = struct.unpack("<d", fh.read(8))
        (is_complex,) = struct.unpack("<q", fh.read(8))
        count = int(np.prod(points))
        dtype = "<c16" if is_complex else "<f8"
        data = np.frombuffer(fh.read(), dtype=dtype, count=count).reshape(points)
    grid = Grid(points, lengths)
    return Field(grid, data.copy()), time


# ---------------------------------------------------------------------------
# run directories

def run(config, out_dir=None, *, diagnostics=None, extra_summary=None):
    """Execute one configuration and write its run directory.

    Returns the Path of the directory.  Raises nothing on numerical abort:
    the blow-up record lands in summary.json and the caller inspects it (the
    CLI maps it to exit code 3).
    """
    from .diagnostics import conserved
    from .integrators import integrate

    spec = config.equation_spec()
    grid = config.make_grid()
    initial = build_initial(config, grid)
    cfg = config.integrator_config()
    diag = diagnostics if diagnostics is not None else conserved

    traj = integrate(spec, initial, cfg, diagnostics=diag)

    out = Path(out_dir or config.outputs.get("directory", f"runs/{config.name}"))
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.json").write_text(config.to_json())

    index_rows = []
    for i, (t, snap) in enumerate(zip(traj.times, traj.snapshots)):
        fname = f"snap_{i:04d}.bin"
        write_snapshot(out / fname, snap, t)
        index_rows.append(
            {
                "file": fname,
                "time": repr(float(t)),
                "complex": int(np.iscomplexobj(snap.values)),
            }
        )
    _write_csv(out / "index.csv", ["file", "time", "complex"], index_rows)

    keys = sorted({k for row in traj.series["values"] for k in row})
    diag_rows = []
    for t, sup, vals in zip(
        traj.series["t"], traj.series["sup"], traj.series["values"]
    ):
        row = {"t": repr(float(t)), "sup": repr(float(sup))}
        for k in keys:
            row[k] = repr(float(vals[k])) if k in vals else ""
        diag_rows.append(row)
    _write_csv(out / "diagnostics.csv", ["t", "sup"] + keys, diag_rows)

    summary = {
        "name": config.name,
        "blowup": (
            {k: v for k, v in traj.blowup.items() if k != "last_state"}
            if traj.blowup
            else None
        ),
        "final_time": traj.series["t"][-1] if traj.series["t"] else 0.0,
        "sup_initial": traj.series["sup"][0] if traj.series["sup"] else 0.0,
        "sup_final": traj.series["sup"][-1] if traj.series["sup"] else 0.0,
        "conservation_drift": _drift(traj, keys),
    }
    if extra_summary:
        summary.update(extra_summary)
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True))
    return out


def _drift(traj, keys):
    out = {}
    for k in keys:
        series = [row[k] for row in traj.series["values"] if k in row]
        if len(series) < 2 or not all(np.isfinite(series)):
            continue
        ref = abs(series[0])
        denom = ref if ref > 1e-14 else 1.0
        out[k] = float(max(abs(s - series[0]) for s in series) / denom)
    return out


def _write_csv(path, fieldnames, rows):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    path.write_text(buf.getvalue())


def load_run(run_dir):
    """Read a run directory back: (config, [(time, Field)...], diagnostics rows)."""
    run_dir = Path(run_dir)
    config = ExperimentConfig.from_json((run_dir / "config.json").read_text())
    snaps = []
    with open(run_dir / "index.csv") as fh:
        for row in csv.DictReader(fh):
            f, t = read_snapshot(run_dir / row["file"])
            snaps.append((t, f))
    with open(run_dir / "diagnostics.csv") as fh:
        diag = list(csv.DictReader(fh))
    return config, snaps, diag
