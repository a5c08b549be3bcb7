"""End-to-end figure rendering against real solver run directories.

Produces the run directories through the solver CLI (the only interface
this package may use), renders every figure kind that applies, and checks
the read-only contract.  Slow: the solver runs take a few minutes total.
"""

import hashlib
import subprocess
import sys
from pathlib import Path

import pytest

from nlwaves_figures.cli import main

# one representative run per covered scenario: 1D soliton propagation,
# solitary-wave resolution, zero-line-mass smoothing, line-soliton
# perturbation
PRESETS = {
    "bo_soliton_propagation": ["waterfall", "fit_overlay", "decay_loglog"],
    "fkdv_alpha06_resolution": ["waterfall", "fit_overlay", "difference"],
    "kp1_zero_mass_smoothing": ["heatmap", "difference"],
    "kp2_line_soliton_perturbed": ["heatmap", "difference"],
}

_CACHE = {}


def solver_run(preset, root):
    if preset not in _CACHE:
        out = root / "runs"
        subprocess.run(
            [sys.executable, "-m", "nlwaves", "run", preset, "--out", str(out)],
            check=True,
            capture_output=True,
            text=True,
        )
        _CACHE[preset] = out / preset
    return _CACHE[preset]


def dir_digest(root):
    h = hashlib.sha256()
    for p in sorted(Path(root).rglob("*")):
        h.update(p.name.encode() + p.read_bytes())
    return h.hexdigest()


@pytest.fixture(scope="session")
def work_root(tmp_path_factory):
    return tmp_path_factory.mktemp("accept")


def test_criterion_12_figures_from_solver_runs(work_root):
    results = []
    ok = True
    for preset, kinds in PRESETS.items():
        run_dir = solver_run(preset, work_root)
        before = dir_digest(run_dir)
        for kind in kinds:
            out = work_root / f"{preset}_{kind}.png"
            code = main(
                ["render", str(run_dir), "--kind", kind, "--out", str(out)]
            )
            made = code == 0 and out.is_file() and out.stat().st_size > 1000
            ok = ok and made
            results.append(f"{preset}:{kind}={'ok' if made else 'FAILED'}")
        untouched = dir_digest(run_dir) == before
        ok = ok and untouched
        if not untouched:
            results.append(f"{preset}: RUN DIR MODIFIED")
    print(
        f"[criterion 12] figure kinds over solver run dirs: "
        f"{'PASS' if ok else 'FAIL'} ({'; '.join(results)})"
    )
    assert ok
