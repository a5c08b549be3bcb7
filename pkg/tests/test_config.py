"""Configuration serialization, snapshot binary format, run directories,
reproducibility, and the command line."""

import json
import subprocess
import sys

import numpy as np
import pytest

from nlwaves import solutions
from nlwaves.config import (
    ExperimentConfig,
    build_initial,
    load_run,
    read_snapshot,
    run,
    validate,
    write_snapshot,
)
from nlwaves.grid import Field, Grid, from_function
from nlwaves.presets import get_preset, list_presets


def tiny_config(**over):
    base = dict(
        name="tiny_kdv",
        equation={"model": "kdv_ist"},
        grid={"points": [256], "lengths": [float(40 * np.pi)]},
        initial={"catalog": "kdv_soliton", "params": {"kappa": 1.0}},
        integrator={
            "dt": 0.01,
            "t_end": 0.1,
            "snapshot_times": [0.0, 0.05, 0.1],
        },
        diagnostics_stride=5,
    )
    base.update(over)
    return ExperimentConfig(**base)


class TestConfigRoundTrip:
    def test_json_round_trip_identity(self):
        cfg = tiny_config()
        back = ExperimentConfig.from_json(cfg.to_json())
        assert back.to_json() == cfg.to_json()
        assert back.name == cfg.name

    def test_fraction_exponent_round_trip(self):
        cfg = tiny_config(
            equation={"model": "gkp", "kp_sign": -1, "r": "4/3"},
            grid={"points": [64, 32], "lengths": [20.0, 10.0]},
            initial={"expression": "0*x"},
        )
        back = ExperimentConfig.from_json(cfg.to_json())
        spec = back.equation_spec()
        assert spec.r == pytest.approx(4.0 / 3.0)

    def test_validate_clean_config(self):
        assert validate(tiny_config()) == []

    def test_validate_reports_bad_model(self):
        probs = validate(tiny_config(equation={"model": "nosuch"}))
        assert any("equation" in p for p in probs)

    def test_validate_reports_dimension_mismatch(self):
        probs = validate(tiny_config(equation={"model": "gkp", "kp_sign": 1}))
        assert any("2D" in p for p in probs)

    def test_validate_reports_bad_dt(self):
        probs = validate(tiny_config(integrator={"dt": -1.0, "t_end": 1.0}))
        assert any("integrator" in p for p in probs)


class TestBuildInitial:
    def test_catalog_with_scale(self):
        cfg = tiny_config(
            initial={"catalog": "kdv_soliton", "params": {"kappa": 1.0},
                     "scale": 3.0}
        )
        f = build_initial(cfg)
        assert np.min(f.values) == pytest.approx(-6.0, rel=1e-10)

    def test_expression_block(self):
        cfg = tiny_config(initial={"expression": "5*sech(x)**2"})
        f = build_initial(cfg)
        assert np.max(f.values) == pytest.approx(5.0, rel=1e-12)

    def test_sum_of_blocks(self):
        cfg = tiny_config(
            initial={
                "sum": [
                    {"catalog": "kdv_soliton", "params": {"kappa": 1.0}},
                    {"expression": "sech(x)**2", "scale": 2.0},
                ]
            }
        )
        f = build_initial(cfg)
        assert np.max(np.abs(f.values)) == pytest.approx(0.0, abs=1e-12)

    def test_complex_models_get_complex_data(self):
        cfg = tiny_config(
            equation={"model": "gp1d"},
            grid={"points": [256], "lengths": [100.0]},
            initial={"catalog": "gp_dark_pair",
                     "params": {"c": 0.5, "length": 100.0}},
        )
        f = build_initial(cfg)
        assert np.iscomplexobj(f.values)


class TestSnapshotFormat:
    def test_round_trip_real_1d(self, tmp_path):
        g = Grid((128,), (25.0,))
        f = from_function(g, lambda x: np.exp(-(x**2)))
        p = tmp_path / "s.bin"
        write_snapshot(p, f, 1.25)
        back, t = read_snapshot(p)
        assert t == 1.25
        assert back.grid.points == (128,) and back.grid.lengths == (25.0,)
        np.testing.assert_array_equal(back.values, f.values)

    def test_round_trip_complex_2d(self, tmp_path):
        g = Grid((32, 16), (10.0, 5.0))
        rng = np.random.default_rng(7)
        vals = rng.normal(size=(32, 16)) + 1j * rng.normal(size=(32, 16))
        p = tmp_path / "s.bin"
        write_snapshot(p, Field(g, vals), 0.5)
        back, t = read_snapshot(p)
        np.testing.assert_array_equal(back.values, vals)
        assert np.iscomplexobj(back.values)

    def test_layout_is_documented_binary(self, tmp_path):
        # int64 dims, int64 n, float64 L, float64 time, int64 is_complex, data
        g = Grid((8,), (2.0,))
        write_snapshot(tmp_path / "s.bin", Field(g, np.arange(8.0)), 3.0)
        raw = (tmp_path / "s.bin").read_bytes()
        assert len(raw) == 8 + 8 + 8 + 8 + 8 + 8 * 8
        assert np.frombuffer(raw[:8], "<i8")[0] == 1
        assert np.frombuffer(raw[8:16], "<i8")[0] == 8
        assert np.frombuffer(raw[16:24], "<f8")[0] == 2.0
        assert np.frombuffer(raw[24:32], "<f8")[0] == 3.0
        assert np.frombuffer(raw[32:40], "<i8")[0] == 0
        np.testing.assert_array_equal(np.frombuffer(raw[40:], "<f8"),
                                      np.arange(8.0))


class TestRunDirectory:
    def test_run_writes_all_artifacts(self, tmp_path):
        out = run(tiny_config(), tmp_path / "r")
        for name in ("config.json", "index.csv", "diagnostics.csv",
                     "summary.json", "snap_0000.bin"):
            assert (out / name).exists()
        summary = json.loads((out / "summary.json").read_text())
        assert summary["blowup"] is None
        # coarse demonstration grid: conservation only to truncation level
        assert summary["conservation_drift"]["mass"] < 1e-5

    def test_load_run_round_trip(self, tmp_path):
        out = run(tiny_config(), tmp_path / "r")
        cfg, snaps, diag = load_run(out)
        assert cfg.name == "tiny_kdv"
        assert [t for t, _ in snaps] == [0.0, 0.05, 0.1]
        assert len(diag) >= 3
        assert set(diag[0]) >= {"t", "sup", "mass"}

    def test_reruns_are_byte_identical(self, tmp_path):
        a = run(tiny_config(), tmp_path / "a")
        b = run(tiny_config(), tmp_path / "b")
        for name in ("config.json", "index.csv", "diagnostics.csv",
                     "summary.json", "snap_0000.bin", "snap_0002.bin"):
            assert (a / name).read_bytes() == (b / name).read_bytes(), name


class TestPresets:
    def test_listing_contains_acceptance_runs(self):
        names = [n for n, _ in list_presets()]
        for expected in (
            "kdv_soliton_propagation",
            "bo_soliton_propagation",
            "ilw_soliton_propagation",
            "kp_lump_propagation",
            "ds2_lump_stationary",
            "gp_dark_propagation",
            "dsii_lump_perturbed_090",
            "dsii_lump_perturbed_110",
        ):
            assert expected in names

    def test_unknown_preset_raises(self):
        with pytest.raises(KeyError):
            get_preset("nope")

    def test_all_presets_validate(self):
        for name, _ in list_presets():
            cfg = get_preset(name)
            assert validate(cfg) == [], name


def run_cli(*args, cwd):
    return subprocess.run(
        [sys.executable, "-m", "nlwaves", *args],
        capture_output=True, text=True, cwd=cwd,
    )


class TestCli:
    def test_list_presets(self, tmp_path):
        r = run_cli("list-presets", cwd=tmp_path)
        assert r.returncode == 0
        assert "kdv_soliton_propagation" in r.stdout

    def test_validate_good_and_bad(self, tmp_path):
        good = tmp_path / "good.json"
        good.write_text(tiny_config().to_json())
        assert run_cli("validate", str(good), cwd=tmp_path).returncode == 0
        bad = tmp_path / "bad.json"
        bad.write_text(tiny_config(equation={"model": "nosuch"}).to_json())
        assert run_cli("validate", str(bad), cwd=tmp_path).returncode == 2

    def test_run_config_file(self, tmp_path):
        cfgp = tmp_path / "c.json"
        cfgp.write_text(tiny_config().to_json())
        r = run_cli("run", str(cfgp), "--out", str(tmp_path / "out"),
                    cwd=tmp_path)
        assert r.returncode == 0, r.stderr
        assert (tmp_path / "out" / "tiny_kdv" / "summary.json").exists()

    def test_sweep_runs_matching_configs(self, tmp_path):
        for i in range(2):
            (tmp_path / f"c{i}.json").write_text(
                tiny_config(name=f"tiny_{i}").to_json()
            )
        r = run_cli("sweep", str(tmp_path / "c*.json"), "--out",
                    str(tmp_path / "runs"), cwd=tmp_path)
        assert r.returncode == 0, r.stderr
        assert (tmp_path / "runs" / "tiny_0" / "summary.json").exists()
        assert (tmp_path / "runs" / "tiny_1" / "summary.json").exists()
