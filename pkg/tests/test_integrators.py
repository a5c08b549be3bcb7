"""Time stepping: phi tables, convergence order, exact linear flow, blow-up."""

import numpy as np
import pytest

from nlwaves import solutions
from nlwaves.equations import EquationSpec
from nlwaves.grid import (
    ConfigurationError,
    ConstraintViolation,
    Field,
    Grid,
    from_function,
)
from nlwaves.integrators import (
    IntegratorConfig,
    _phi123,
    integrate,
    linear_propagate,
)


class TestPhiTables:
    def test_matches_closed_form_away_from_zero(self):
        z = np.array([1.0 + 2.0j, -3.0j, 0.5])
        p1, p2, p3 = _phi123(z)
        assert np.allclose(p1, (np.exp(z) - 1) / z, rtol=1e-12)
        assert np.allclose(p2, (np.exp(z) - 1 - z) / z**2, rtol=1e-12)
        assert np.allclose(p3, (np.exp(z) - 1 - z - z**2 / 2) / z**3, rtol=1e-11)

    def test_limit_values_at_zero(self):
        p1, p2, p3 = _phi123(np.array([0.0]))
        assert p1[0] == pytest.approx(1.0)
        assert p2[0] == pytest.approx(0.5)
        assert p3[0] == pytest.approx(1 / 6)

    def test_series_matches_closed_form_near_threshold(self):
        # just below the switch point the truncated series must agree with
        # the closed forms to many digits (no jump at the branch boundary)
        for z0 in (0.9e-2, 0.9e-2j, (0.9e-2 + 0.9e-2j) / np.sqrt(2)):
            z = np.array([z0])
            p1, p2, p3 = _phi123(z)
            assert abs(p1[0] - (np.exp(z0) - 1) / z0) < 1e-12
            assert abs(p2[0] - (np.exp(z0) - 1 - z0) / z0**2) < 1e-10
            assert abs(p3[0] - (np.exp(z0) - 1 - z0 - z0**2 / 2) / z0**3) < 1e-7

    def test_no_real_parts_discarded(self):
        # purely imaginary z gives complex phi values with nonzero real part
        p1, _, _ = _phi123(np.array([2.0j]))
        assert p1[0].real != 0.0 and p1[0].imag != 0.0


class TestConfigValidation:
    def test_rejects_negative_dt(self):
        with pytest.raises(ConfigurationError):
            IntegratorConfig(dt=-0.1, t_end=1.0)

    def test_rejects_unknown_scheme(self):
        with pytest.raises(ConfigurationError):
            IntegratorConfig(dt=0.1, t_end=1.0, scheme="rk45")

    def test_rejects_off_grid_snapshot(self):
        cfg = IntegratorConfig(dt=0.1, t_end=1.0, snapshot_times=(0.05,))
        g = Grid((64,), (2 * np.pi,))
        f = Field(g, np.sin(g.axis(0)), "physical")
        with pytest.raises(ConfigurationError):
            integrate(EquationSpec(model="kdv"), f, cfg)

    def test_rejects_snapshot_beyond_horizon(self):
        with pytest.raises(ConfigurationError):
            IntegratorConfig(dt=0.1, t_end=1.0, snapshot_times=(2.0,))


class TestLinearPropagate:
    def test_exact_single_mode(self):
        g = Grid((64,), (2 * np.pi,))
        x = g.axis(0)
        f = Field(g, np.cos(2 * x), "physical")
        out = linear_propagate(f, EquationSpec(model="kdv"), 0.7)
        # u_t + u_xxx = 0: cos(2x) -> cos(2(x + 4t))
        assert np.allclose(out.values, np.cos(2 * (x + 4 * 0.7)), atol=1e-12)

    def test_unitary_for_all_models(self):
        g = Grid((64,), (10.0,))
        rng = np.random.default_rng(3)
        f = Field(g, rng.standard_normal(64), "physical")
        for model in ("kdv", "bo", "whitham", "fbbm"):
            out = linear_propagate(f, EquationSpec(model=model), 2.0)
            assert np.sum(out.values**2) == pytest.approx(np.sum(f.values**2), rel=1e-12)


def soliton_run(dt, scheme="etdrk4"):
    g = Grid((512,), (40 * np.pi,))
    f = from_function(g, lambda x: solutions.kdv_soliton(x, kappa=1.0))
    cfg = IntegratorConfig(dt=dt, t_end=0.5, scheme=scheme, snapshot_times=(0.5,))
    traj = integrate(EquationSpec(model="kdv_ist"), f, cfg)
    return traj.snapshot_at(0.5).values


class TestConvergence:
    @pytest.mark.parametrize("scheme", ["etdrk4", "ifrk4"])
    def test_fourth_order_in_time(self, scheme):
        # measure against a fine-step reference on the same grid so the
        # (fixed) spatial truncation error cancels out of the comparison
        ref = soliton_run(0.5 / 2048, scheme)
        errs = [
            float(np.max(np.abs(soliton_run(dt, scheme) - ref)))
            for dt in (0.02, 0.01, 0.005)
        ]
        orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
        assert orders.mean() > 3.7
        assert orders.min() > 3.5

    def test_schemes_agree(self):
        diff = np.max(np.abs(soliton_run(0.005) - soliton_run(0.005, "ifrk4")))
        assert diff < 1e-4


class TestBlowupHandling:
    def test_focusing_overload_sets_flag(self):
        # the over-massed lump perturbation of the focusing 2D system
        # collapses; the run must abort with a populated blow-up record.
        # The focusing spike must be resolved for the fixed-step integrator
        # to diverge on it, hence the fine grid relative to the box.
        g = Grid((256, 256), (30.0, 30.0))
        f = from_function(
            g, lambda x, y: 1.6 * solutions.ds2_lump(x, y, c=1.0), dtype=complex
        )
        cfg = IntegratorConfig(
            dt=0.1, t_end=4.0, snapshot_times=(0.0, 4.0), diagnostics_stride=5
        )
        traj = integrate(EquationSpec(model="ds2", rho=-1, beta=1.0), f, cfg)
        assert traj.blown_up
        assert traj.blowup["reason"] in ("sup-norm growth", "non-finite state")
        assert traj.blowup["time"] < 4.0
        assert "last_state" in traj.blowup

    def test_stable_run_has_no_flag(self):
        g = Grid((64,), (2 * np.pi,))
        f = Field(g, 0.1 * np.sin(g.axis(0)), "physical")
        cfg = IntegratorConfig(dt=0.01, t_end=0.5, snapshot_times=(0.5,))
        traj = integrate(EquationSpec(model="kdv"), f, cfg)
        assert not traj.blown_up


class TestKpZeroMassConstraint:
    def grid_and_data(self):
        g = Grid((64, 64), (20.0, 20.0))
        f = from_function(g, lambda x, y: 1.0 / np.cosh(np.sqrt(x**2 + y**2)) ** 2)
        return g, f

    def test_permissive_projects_after_t0(self):
        g, f = self.grid_and_data()
        cfg = IntegratorConfig(dt=0.01, t_end=0.05, snapshot_times=(0.0, 0.05))
        traj = integrate(EquationSpec(model="gkp", kp_sign=-1), f, cfg)
        dx = g.lengths[0] / g.points[0]
        line0 = np.max(np.abs(np.sum(traj.snapshot_at(0.0).values, axis=0))) * dx
        line1 = np.max(np.abs(np.sum(traj.snapshot_at(0.05).values, axis=0))) * dx
        assert line0 > 0.1  # raw data violates the constraint
        assert line1 < 1e-10  # enforced from the first step on

    def test_strict_raises(self):
        _, f = self.grid_and_data()
        cfg = IntegratorConfig(dt=0.01, t_end=0.05)
        spec = EquationSpec(model="gkp", kp_sign=-1, strict_zero_mass=True)
        with pytest.raises(ConstraintViolation):
            integrate(spec, f, cfg)


class TestDiagnosticsSeries:
    def test_stride_and_callback(self):
        g = Grid((64,), (2 * np.pi,))
        f = Field(g, np.sin(g.axis(0)), "physical")
        seen = []

        def diag(spec, field):
            seen.append(float(np.max(np.abs(field.values))))
            return {"sup": seen[-1]}

        cfg = IntegratorConfig(
            dt=0.01, t_end=0.1, snapshot_times=(0.0, 0.1), diagnostics_stride=5
        )
        traj = integrate(EquationSpec(model="kdv"), f, cfg, diagnostics=diag)
        assert len(traj.series["t"]) == 3  # t = 0, 0.05, 0.1
        assert len(seen) == 3
        assert traj.snapshot_at(0.1).values.shape == (64,)
