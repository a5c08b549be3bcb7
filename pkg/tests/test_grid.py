"""Spectral core: transforms, multipliers, derivatives, dealiasing."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nlwaves.grid import (
    ConfigurationError,
    ConstraintViolation,
    Field,
    Grid,
    antiderivative_x,
    apply_multiplier,
    dealias,
    dealias_mask,
    derivative,
    from_function,
    integrate_phys,
    norm_l2,
    to_physical,
    to_spectral,
    zero_mode_mass,
)


def grid1d(n=64, length=2 * np.pi):
    return Grid((n,), (length,))


class TestGrid:
    def test_axis_endpoints(self):
        g = grid1d(8, 8.0)
        x = g.axis(0)
        assert x[0] == -4.0
        assert x[-1] == pytest.approx(3.0)
        assert np.allclose(np.diff(x), 1.0)

    def test_wavenumbers_integer_multiples(self):
        g = grid1d(16, 4 * np.pi)
        k = g.wavenumbers(0)
        assert k[1] == pytest.approx(0.5)
        assert k.min() == pytest.approx(-4.0)

    def test_rejects_odd_points(self):
        with pytest.raises(ConfigurationError):
            Grid((63,), (1.0,))

    def test_rejects_mismatched_lengths(self):
        with pytest.raises(ConfigurationError):
            Grid((64, 64), (1.0,))

    def test_cell_volume(self):
        g = Grid((8, 16), (2.0, 4.0))
        assert g.cell_volume == pytest.approx(2.0 / 8 * 4.0 / 16)


class TestTransforms:
    def test_round_trip(self):
        g = grid1d()
        u = np.cos(3 * g.axis(0)) + 0.5
        f = Field(g, u, "physical")
        back = to_physical(to_spectral(f))
        assert np.allclose(back.values, u, atol=1e-13)

    def test_parseval(self):
        rng = np.random.default_rng(0)
        g = grid1d(128, 10.0)
        u = rng.standard_normal(128)
        f = Field(g, u, "physical")
        # L2 norm must agree in both spaces
        assert norm_l2(to_spectral(f)) == pytest.approx(norm_l2(f), rel=1e-12)
        assert norm_l2(f) == pytest.approx(
            np.sqrt(np.sum(u**2) * g.cell_volume), rel=1e-12
        )

    def test_integrate_phys_constant(self):
        g = Grid((32, 16), (3.0, 5.0))
        f = Field(g, np.full(g.shape, 2.0), "physical")
        assert integrate_phys(f) == pytest.approx(30.0)

    @given(st.integers(1, 10), st.floats(-2, 2), st.floats(-2, 2))
    @settings(max_examples=25, deadline=None)
    def test_linearity(self, mode, a, b):
        g = grid1d()
        x = g.axis(0)
        u, v = np.cos(mode * x), np.sin(2 * x)
        fu = to_spectral(Field(g, u, "physical")).values
        fv = to_spectral(Field(g, v, "physical")).values
        fw = to_spectral(Field(g, a * u + b * v, "physical")).values
        assert np.allclose(fw, a * fu + b * fv, atol=1e-10)


class TestDerivative:
    def test_exact_on_trig(self):
        g = grid1d(64, 2 * np.pi)
        x = g.axis(0)
        f = Field(g, np.sin(5 * x), "physical")
        d = to_physical(derivative(f))
        assert np.allclose(d.values, 5 * np.cos(5 * x), atol=1e-11)

    def test_second_derivative(self):
        g = grid1d(64, 2 * np.pi)
        x = g.axis(0)
        f = Field(g, np.cos(4 * x), "physical")
        d = to_physical(derivative(f, order=2))
        assert np.allclose(d.values, -16 * np.cos(4 * x), atol=1e-10)

    def test_realness_preserved(self):
        rng = np.random.default_rng(1)
        g = grid1d(64, 3.0)
        f = Field(g, rng.standard_normal(64), "physical")
        d = to_physical(derivative(f))
        assert d.values.dtype.kind == "f"

    def test_axis_selection(self):
        g = Grid((32, 32), (2 * np.pi, 2 * np.pi))
        xx, yy = g.meshgrid()
        f = Field(g, np.sin(yy), "physical")
        dy = to_physical(derivative(f, axis=1))
        assert np.allclose(dy.values, np.cos(yy), atol=1e-11)
        dx = to_physical(derivative(f, axis=0))
        assert np.allclose(dx.values, 0.0, atol=1e-12)


class TestMultiplier:
    def test_matches_derivative(self):
        g = grid1d(64, 2 * np.pi)
        x = g.axis(0)
        f = Field(g, np.sin(3 * x), "physical")
        viaop = to_physical(apply_multiplier(f, 1j * g.wavenumbers(0)))
        viader = to_physical(derivative(f))
        assert np.allclose(viaop.values, viader.values, atol=1e-12)

    def test_want_real_false_keeps_complex(self):
        g = grid1d()
        f = Field(g, np.ones(64), "physical")
        out = to_physical(apply_multiplier(f, 1j * np.ones(64), want_real=False))
        assert out.values.dtype.kind == "c"


class TestAntiderivative:
    def test_inverts_derivative_on_mean_free(self):
        g = grid1d(64, 2 * np.pi)
        x = g.axis(0)
        f = Field(g, np.cos(2 * x), "physical")
        back = to_physical(antiderivative_x(derivative(f)))
        assert np.allclose(back.values, np.cos(2 * x), atol=1e-11)

    def test_strict_raises_on_mean(self):
        g = grid1d()
        f = Field(g, np.ones(64) + np.cos(g.axis(0)), "physical")
        with pytest.raises(ConstraintViolation) as e:
            antiderivative_x(f, strict=True)
        assert e.value.mass > 0.1

    def test_permissive_projects_mean(self):
        g = grid1d()
        f = Field(g, 3.0 + np.sin(g.axis(0)), "physical")
        out = to_physical(antiderivative_x(f))
        assert abs(np.mean(out.values)) < 1e-12
        assert np.allclose(out.values, -np.cos(g.axis(0)), atol=1e-11)

    def test_zero_mode_mass_reporting(self):
        g = grid1d()
        assert zero_mode_mass(Field(g, np.sin(g.axis(0)), "physical")) < 1e-14
        assert zero_mode_mass(Field(g, np.ones(64), "physical")) == pytest.approx(1.0)


class TestDealias:
    def test_mask_kills_upper_third(self):
        g = grid1d(96, 2 * np.pi)
        mask = dealias_mask(g)
        k = g.wavenumbers(0)
        assert not mask[np.argmin(np.abs(k - 40))]
        assert mask[np.argmin(np.abs(k - 30))]

    def test_idempotent(self):
        rng = np.random.default_rng(2)
        g = grid1d(64, 5.0)
        f = to_spectral(Field(g, rng.standard_normal(64), "physical"))
        once = dealias(f).values
        twice = dealias(dealias(f)).values
        assert np.array_equal(once, twice)

    def test_low_modes_untouched(self):
        g = grid1d(64, 2 * np.pi)
        x = g.axis(0)
        f = Field(g, np.cos(3 * x), "physical")
        out = to_physical(dealias(to_spectral(f)))
        assert np.allclose(out.values, np.cos(3 * x), atol=1e-12)


def test_from_function_2d():
    g = Grid((32, 16), (2 * np.pi, 2 * np.pi))
    f = from_function(g, lambda x, y: np.sin(x) * np.cos(2 * y))
    xx, yy = g.meshgrid()
    assert np.allclose(f.values, np.sin(xx) * np.cos(2 * yy))
