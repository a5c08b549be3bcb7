"""Figure renderers for run directories.

Five kinds:

- ``waterfall``: 1D runs; every stored snapshot as a line, offset by time.
- ``heatmap``: one snapshot of a 2D run as an image (|values| if complex).
- ``fit_overlay``: a 1D snapshot with sech^2 profiles fitted at its humps
  drawn over it in green.
- ``decay_loglog``: sup norm against time from diagnostics.csv on log-log
  axes with the fitted slope annotated.
- ``difference``: a snapshot minus the initial snapshot (the perturbation
  field with the background state removed).

Only data fidelity matters here; cosmetics are deliberately plain.
"""

from __future__ import annotations

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


class RenderError(ValueError):
    """Raised when a run lacks the data a figure kind needs."""


def _real_view(values):
    return np.abs(values) if np.iscomplexobj(values) else values


def _pick(run, snapshot_index):
    try:
        return run.snapshots[snapshot_index]
    except IndexError:
        raise RenderError(
            f"snapshot {snapshot_index} not in run {run.name} "
            f"({len(run.snapshots)} stored)"
        )


def _save(fig, out_path):
    fig.savefig(out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return out_path


def waterfall(run, out_path, snapshot_index=None):
    """All snapshots of a 1D run, stacked lines offset by time."""
    if not run.snapshots or run.snapshots[0].dims != 1:
        raise RenderError("waterfall needs a 1D run with stored snapshots")
    amps = [float(np.max(np.abs(s.values))) for s in run.snapshots]
    dts = np.diff(run.times)
    scale = (min(dt for dt in dts if dt > 0) if len(dts) else 1.0) / max(
        max(amps), 1e-30
    )
    fig, ax = plt.subplots(figsize=(7, 5))
    for s in run.snapshots:
        ax.plot(s.axis(0), s.time + scale * _real_view(s.values), "k", lw=0.8)
    ax.set_xlabel("x")
    ax.set_ylabel("t")
    ax.set_title(f"{run.name}: solution in dependence of t")
    return _save(fig, out_path)


def heatmap(run, out_path, snapshot_index=-1):
    """One 2D snapshot as an image over the periodic box."""
    s = _pick(run, snapshot_index)
    if s.dims != 2:
        raise RenderError("heatmap needs a 2D run")
    lx, ly = s.lengths
    fig, ax = plt.subplots(figsize=(6, 5))
    im = ax.imshow(
        _real_view(s.values).T,
        origin="lower",
        extent=(-lx / 2, lx / 2, -ly / 2, ly / 2),
        aspect="auto",
        cmap="viridis",
    )
    fig.colorbar(im, ax=ax)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(f"{run.name}: t = {s.time:g}")
    return _save(fig, out_path)


def _fit_humps(x, u, prominence=0.1):
    """Fit A sech^2((x-x0)/w) at each well-separated hump of a 1D profile.

    Peak location and height come straight from the samples; the width from
    the half-height crossings.  Returns a list of (x0, A, w).
    """
    n = len(u)
    floor = prominence * np.max(np.abs(u))
    fits = []
    for i in range(n):
        if u[i] < floor or u[i] <= u[i - 1] or u[i] <= u[(i + 1) % n]:
            continue
        a = u[i]
        # walk to the half-height on each side (periodic)
        half = a / 2
        left = right = 0
        while left < n // 2 and u[(i - left) % n] > half:
            left += 1
        while right < n // 2 and u[(i + right) % n] > half:
            right += 1
        dx = x[1] - x[0]
        # sech^2 falls to half height at |x-x0| = w * arccosh(sqrt 2)
        w = (left + right) / 2 * dx / np.arccosh(np.sqrt(2.0))
        fits.append((x[i], a, w))
    return fits


def fit_overlay(run, out_path, snapshot_index=-1):
    """A 1D snapshot with fitted solitons drawn at the humps in green."""
    s = _pick(run, snapshot_index)
    if s.dims != 1:
        raise RenderError("fit_overlay needs a 1D run")
    x, u = s.axis(0), _real_view(s.values)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(x, u, "k", lw=1.0, label="solution")
    for x0, a, w in _fit_humps(x, u):
        mask = np.abs(x - x0) < 6 * w
        ax.plot(
            x[mask],
            a / np.cosh((x[mask] - x0) / w) ** 2,
            "g--",
            lw=1.5,
        )
    ax.set_xlabel("x")
    ax.set_ylabel("u")
    ax.set_title(f"{run.name}: t = {s.time:g}, fitted solitary waves (green)")
    ax.legend(loc="upper left")
    return _save(fig, out_path)


def decay_loglog(run, out_path, snapshot_index=None):
    """Sup norm vs time, log-log, with the fitted decay slope annotated."""
    ts = np.array([row["t"] for row in run.diagnostics])
    sups = np.array([row["sup"] for row in run.diagnostics])
    keep = (ts > 0) & (sups > 0)
    if keep.sum() < 3:
        raise RenderError("decay_loglog needs >= 3 positive-time diagnostics rows")
    ts, sups = ts[keep], sups[keep]
    slope, intercept = np.polyfit(np.log(ts), np.log(sups), 1)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.loglog(ts, sups, "ko", ms=3, label=r"$\|u(t)\|_\infty$")
    ax.loglog(ts, np.exp(intercept) * ts**slope, "r-", lw=1.0,
              label=f"slope {slope:.2f}")
    ax.set_xlabel("t")
    ax.set_ylabel("sup norm")
    ax.set_title(f"{run.name}: sup-norm decay")
    ax.legend()
    return _save(fig, out_path)


def difference(run, out_path, snapshot_index=-1):
    """Snapshot minus the initial snapshot (the evolved perturbation)."""
    if len(run.snapshots) < 2:
        raise RenderError("difference needs at least two snapshots")
    s0, s = run.snapshots[0], _pick(run, snapshot_index)
    d = _real_view(s.values) - _real_view(s0.values)
    if s.dims == 2:
        lx, ly = s.lengths
        fig, ax = plt.subplots(figsize=(6, 5))
        im = ax.imshow(
            d.T,
            origin="lower",
            extent=(-lx / 2, lx / 2, -ly / 2, ly / 2),
            aspect="auto",
            cmap="RdBu_r",
        )
        fig.colorbar(im, ax=ax)
        ax.set_ylabel("y")
    else:
        fig, ax = plt.subplots(figsize=(7, 4))
        ax.plot(s.axis(0), d, "k", lw=1.0)
        ax.set_ylabel("difference")
    ax.set_xlabel("x")
    ax.set_title(f"{run.name}: u(t={s.time:g}) - u(t={s0.time:g})")
    return _save(fig, out_path)


KINDS = {
    "waterfall": waterfall,
    "heatmap": heatmap,
    "fit_overlay": fit_overlay,
    "decay_loglog": decay_loglog,
    "difference": difference,
}


def render(run, kind, out_path, snapshot_index=-1):
    """Dispatch one figure kind; returns the output path."""
    try:
        fn = KINDS[kind]
    except KeyError:
        raise RenderError(f"unknown figure kind {kind!r}")
    return fn(run, out_path, snapshot_index=snapshot_index)
