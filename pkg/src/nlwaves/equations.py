"""Evolution models assembled as diagonal linear part plus nonlinear remainder.

Every model is written as ``u_t = L u + N(u)`` where L is a Fourier multiplier
(the stiff, exactly integrable part) and N collects the nonlinear terms plus
any non-diagonalizable linear terms.  The sign conventions, fixed once here
and used by the solution catalog and the diagnostics:

- kdv:      u_t + u u_x + u_xxx = 0
- kdv_ist:  u_t - 6 u u_x + u_xxx = 0      (the inverse-scattering normalization)
- fkdv:     u_t + u u_x - D^a u_x = 0      with (D^a f)^ = |k|^a f^   (a=2 is kdv)
- bo:       u_t + u u_x - D u_x = 0        (fkdv with a = 1)
- ilw:      u_t + u u_x + (1/d) u_x - L_d u_x = 0,   L_d(k) = k coth(k d)
- whitham:  u_t + u u_x - L u_x = 0,       p(k) = (1+b k^2)^{1/2} (tanh k / k)^{1/2}
- fbbm:     u_t + u_x + u u_x + D^a u_t = 0
- gp1d:     i psi_t + psi_xx + (1 - |psi|^2) psi = 0
- gkp:      u_t + u^r u_x + u_xxx + s * dx^{-1} u_yy = 0,  s = kp_sign (+1: the
            sign family with transversally stable line solitons; -1: the lump
            family)
- kpbbm:    u_t + u_x + u u_x + D^a u_t + dx^{-1} u_yy = 0
- ds2:      i psi_t + psi_xx - psi_yy + 2 rho (beta Phi + |psi|^2) psi = 0,
            Phi = 2 (-Lap)^{-1} dxx |psi|^2
- nv:       v_t - 2 v_xxx + 6 v_xyy + 2 E (L1 v_x + L2 v_y)
                 - 2 [ (v L1 v)_x + (v L2 v)_y ] = 0
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import symbols
from .grid import (
    ConfigurationError,
    Field,
    Grid,
    antiderivative_x,
    apply_multiplier,
    dealias_mask,
    to_physical,
    to_spectral,
)

MODELS_1D = ("kdv", "kdv_ist", "fkdv", "fbbm", "whitham", "bo", "ilw", "gp1d")
MODELS_2D = ("gkp", "kpbbm", "ds2", "nv")
ALL_MODELS = MODELS_1D + MODELS_2D
COMPLEX_MODELS = ("gp1d", "ds2")


@dataclass(frozen=True)
class EquationSpec:
    """Which model to run and its parameters."""

    model: str
    alpha: float = 2.0
    delta: float = 1.0
    beta: float = 0.0
    kp_sign: int = 1
    rho: int = -1
    r: Fraction = Fraction(1)
    E: float = 0.0
    strict_zero_mass: bool = False

    def __post_init__(self):
        if self.model not in ALL_MODELS:
            raise ConfigurationError(f"unknown model {self.model!r}")
        r = Fraction(self.r)
        if r <= 0 or r.denominator % 2 == 0:
            raise ConfigurationError(
                "nonlinearity power must be a positive rational with odd denominator"
            )
        object.__setattr__(self, "r", r)
        if self.model == "gkp" and self.kp_sign not in (-1, 1):
            raise ConfigurationError("kp_sign must be +1 or -1")
        if self.model == "ds2" and self.rho not in (-1, 1):
            raise ConfigurationError("rho must be +1 or -1")
        if self.model == "ilw" and self.delta <= 0:
            raise ConfigurationError("depth parameter must be positive")

    @property
    def dims(self):
        return 1 if self.model in MODELS_1D else 2

    @property
    def is_complex(self):
        return self.model in COMPLEX_MODELS

    @property
    def dealias_rule(self):
        """Retained-mode fraction: 2/(degree+1) for a degree-d nonlinearity."""
        if self.model in COMPLEX_MODELS:
            return 0.5  # cubic
        if self.model == "gkp":
            deg = float(self.r) + 1
            return min(2.0 / (deg + 1.0), 2 / 3)
        return 2 / 3  # quadratic


def _kx_inv(grid):
    """Table of 1/(i k_x) with the k_x = 0 column zeroed."""
    kx = grid.spectral_meshgrid()[0]
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(kx == 0, 0.0, 1.0 / np.where(kx == 0, 1.0, 1j * kx))


def linear_symbol(spec, grid):
    """Multiplier m(k) of the diagonal linear part: u_t^ = m(k) u^ + N^.

    For the real-valued models the symbol is imaginary and odd in k_x, so it
    is zeroed on the k_x Nyquist plane: that mode has no conjugate partner
    and a nonzero multiplier there would rotate real data into a spurious
    imaginary residue.
    """
    if spec.dims != grid.dims:
        raise ConfigurationError(
            f"model {spec.model} needs a {spec.dims}D grid, got {grid.dims}D"
        )
    m = _linear_symbol_raw(spec, grid)
    if not spec.is_complex:
        m = m.copy()
        m[grid.points[0] // 2] = 0.0
    return m


def _linear_symbol_raw(spec, grid):
    if grid.dims == 1:
        k = grid.wavenumbers(0)
        if spec.model in ("kdv", "kdv_ist"):
            return 1j * k**3
        if spec.model == "fkdv":
            return 1j * k * symbols.symbol_fkdv(k, spec.alpha)
        if spec.model == "bo":
            return 1j * k * np.abs(k)
        if spec.model == "ilw":
            return 1j * k * symbols.symbol_ilw(k, spec.delta, shifted=True)
        if spec.model == "whitham":
            return 1j * k * symbols.symbol_whitham(k, spec.beta)
        if spec.model == "fbbm":
            return -1j * k / (1 + symbols.symbol_fkdv(k, spec.alpha))
        if spec.model == "gp1d":
            return -1j * k**2
        raise ConfigurationError(spec.model)
    kx, ky = grid.spectral_meshgrid()
    with np.errstate(divide="ignore", invalid="ignore"):
        y_over_x = np.where(kx == 0, 0.0, ky**2 / np.where(kx == 0, 1.0, kx))
    if spec.model == "gkp":
        return 1j * (kx**3 - spec.kp_sign * y_over_x)
    if spec.model == "kpbbm":
        return -1j * (kx + y_over_x) / (1 + symbols.symbol_fkdv(kx, spec.alpha))
    if spec.model == "ds2":
        return 1j * (ky**2 - kx**2)
    if spec.model == "nv":
        return 1j * (6 * kx * ky**2 - 2 * kx**3)
    raise ConfigurationError(spec.model)


def ds2_potential(intensity):
    """Mean-zero potential Phi = 2 (-Lap)^{-1} dxx applied to |psi|^2."""
    kx, ky = intensity.grid.spectral_meshgrid()
    sym = 2.0 * symbols.symbol_ds2_riesz(kx, ky)
    out = apply_multiplier(to_physical(intensity), sym)
    return out.with_values(out.values.real)


class _RHS:
    """Precomputed nonlinear right-hand side for one (spec, grid) pair.

    Callable on spectral value arrays; returns the spectral, dealiased
    nonlinear term.  Keeping the multiplier tables here makes the per-step
    cost pure FFT work.
    """

    def __init__(self, spec, grid):
        self.spec = spec
        self.grid = grid
        self.mask = dealias_mask(grid, spec.dealias_rule)
        if grid.dims == 1:
            self.kx = grid.wavenumbers(0)
            self.ikx = 1j * self.kx.copy()
            self.ikx[grid.points[0] // 2] = 0.0
        else:
            kx, ky = grid.spectral_meshgrid()
            self.kx, self.ky = kx, ky
            self.ikx = 1j * kx.copy()
            self.ikx[grid.points[0] // 2, :] = 0.0
            self.iky = 1j * ky.copy()
            self.iky[:, grid.points[1] // 2] = 0.0
        m = spec.model
        if m in ("fbbm", "kpbbm"):
            self.bbm_factor = 1.0 / (1 + symbols.symbol_fkdv(self.kx, spec.alpha))
        if m == "ds2":
            self.riesz2 = 2.0 * symbols.symbol_ds2_riesz(self.kx, self.ky)
        if m == "nv":
            self.l1 = symbols.symbol_nv(self.kx, self.ky, "L1")
            self.l2 = symbols.symbol_nv(self.kx, self.ky, "L2")

    def _fft(self, u):
        return np.fft.fftn(u)

    def _ifft(self, v):
        return np.fft.ifftn(v)

    def __call__(self, v):
        """Nonlinear term in spectral space, already dealiased."""
        spec, m = self.spec, self.spec.model
        vd = np.where(self.mask, v, 0.0)
        u = self._ifft(vd)
        if m in ("kdv", "fkdv", "bo", "ilw", "whitham"):
            flux = self._fft((u.real if np.isrealobj(u) else u) ** 2) * (-0.5)
            return self.mask * self.ikx * flux
        if m == "kdv_ist":
            return self.mask * self.ikx * self._fft(u**2) * 3.0
        if m == "fbbm":
            return self.mask * self.ikx * self._fft(u**2) * (-0.5) * self.bbm_factor
        if m == "kpbbm":
            return self.mask * self.ikx * self._fft(u**2) * (-0.5) * self.bbm_factor
        if m == "gkp":
            ur = u.real
            p = float(spec.r) + 1.0
            if spec.r.denominator == 1:
                upow = ur ** (spec.r.numerator + 1)
            else:
                # rational power with odd denominator: take the real root,
                # u^{r+1} = sign(u)^{num+den} |u|^{r+1}
                sgn = np.sign(ur) ** (spec.r.numerator + spec.r.denominator)
                upow = sgn * np.abs(ur) ** p
            return self.mask * self.ikx * self._fft(upow) * (-1.0 / p)
        if m == "gp1d":
            return self.mask * self._fft(1j * (1 - np.abs(u) ** 2) * u)
        if m == "ds2":
            inten = np.abs(u) ** 2
            phi = self._ifft(self.riesz2 * self._fft(inten)).real
            return self.mask * self._fft(
                2j * spec.rho * (spec.beta * phi + inten) * u
            )
        if m == "nv":
            vr = u.real
            vhat = self._fft(vr)
            l1v = self._ifft(self.l1 * vhat).real
            l2v = self._ifft(self.l2 * vhat).real
            quad = self.ikx * self._fft(vr * l1v) + self.iky * self._fft(vr * l2v)
            lin = self.ikx * self.l1 * vhat + self.iky * self.l2 * vhat
            return self.mask * (2.0 * quad - 2.0 * spec.E * lin)
        raise ConfigurationError(m)


def nonlinear_rhs(spec, state):
    """Dealiased nonlinear term of `spec` evaluated on a physical Field."""
    f = to_physical(state)
    if not np.all(np.isfinite(f.values)):
        raise FloatingPointError("non-finite state handed to the nonlinear term")
    rhs = _RHS(spec, f.grid)
    out = np.fft.ifftn(rhs(np.fft.fftn(f.values)))
    if not spec.is_complex:
        out = out.real
    return Field(f.grid, out)


def full_rhs(spec, state):
    """Complete discrete right-hand side u_t = L u + N(u) on a physical Field."""
    f = to_physical(state)
    lin = apply_multiplier(
        to_spectral(f), linear_symbol(spec, f.grid)
    )
    lin_phys = to_physical(lin)
    nl = nonlinear_rhs(spec, f)
    vals = lin_phys.values + nl.values
    if not spec.is_complex:
        vals = vals.real
    return Field(f.grid, vals)


def check_gp_periodicity(field, tol=1e-8):
    """Reject torus-incompatible data: boundary mismatch across the period.

    The measure is the jump of the (smooth) samples between the last and first
    grid node compared against the largest neighboring jump inside the domain;
    non-periodic data (a single dark soliton, say) shows an O(1) edge jump.
    """
    u = to_physical(field).values
    inner = np.max(np.abs(np.diff(u, axis=0)))
    edge = np.max(np.abs(u[0] - u[-1]))
    if edge > max(tol, 3.0 * inner):
        raise ConfigurationError(
            f"initial data is not periodic on the torus (edge jump {edge:.2e}, "
            f"interior step {inner:.2e})"
        )


def ds1_wave_potential(f, c):
    """Hyperbolic potential of the wave-type Davey-Stewartson constraint.

    Solves (in integral form) the cone problem whose kernel is the product of
    Heaviside functions H(c(x1-x)+y-y1) H(c(x1-x)+y1-y): the value at (x, y)
    is half the integral of f over the backward characteristic cone
    { x1 >= x, |y1 - y| <= c (x1 - x) }.

    Implemented row-spectrally: Fourier transform in y turns the inner
    y-integral into multiplication by 2 sin(k c (x1-x))/k, and the remaining
    x1-integral is a suffix trapezoid sum with an endpoint (Euler-Maclaurin)
    correction, so the result is O(h^4) accurate for smooth decaying f.
    """
    if c <= 0:
        raise symbols.ParameterError("wave speed must be positive")
    g = to_physical(f)
    if g.grid.dims != 2:
        raise ConfigurationError("the cone potential needs a 2D field")
    u = g.values.real
    nx, ny = g.grid.points
    hx = g.grid.lengths[0] / nx
    ky = g.grid.wavenumbers(1)
    fy = np.fft.fft(u, axis=1)  # rows: fy[j, k] at x1 = x_j
    xg = g.grid.axis(0)
    phi_hat = np.zeros_like(fy)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv_k = np.where(ky == 0, 0.0, 1.0 / np.where(ky == 0, 1.0, ky))
    for i in range(nx):
        dx1 = xg[i:] - xg[i]  # Delta >= 0
        # inner integral over y1: 2 sin(k w)/k per mode with half-width
        # w = min(c D, Ly/2) (the cap keeps the periodized rows from being
        # counted more than once; f is assumed negligible outside the box),
        # -> 2 w at k = 0
        half_w = np.minimum(c * dx1, g.grid.lengths[1] / 2.0)
        arg = np.outer(half_w, ky)
        kernel = np.where(ky == 0, 2 * half_w[:, None], 2 * np.sin(arg) * inv_k)
        integrand = fy[i:, :] * kernel
        # remaining x1-integral: trapezoid plus the Euler-Maclaurin endpoint
        # term; the integrand vanishes at x1 = x with slope 2 c fy[i, k]
        tr = np.trapezoid(integrand, dx=hx, axis=0)
        corr = (hx**2 / 12.0) * 2.0 * c * fy[i, :]
        phi_hat[i, :] = 0.5 * (tr + corr)
    phi = np.fft.ifft(phi_hat, axis=1).real
    return Field(g.grid, phi)
