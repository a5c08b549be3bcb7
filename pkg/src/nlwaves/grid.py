"""Periodic grids, spectral transforms, and Fourier-multiplier machinery.

All solvers in this package work on uniform periodic grids in one or two
dimensions.  A :class:`Field` couples sampled values to a :class:`Grid` and
remembers whether it currently lives in physical or spectral space; the
module-level functions (`transform`, `apply_multiplier`, `antiderivative_x`,
`dealias`) are pure and never mutate their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

PHYSICAL = "physical"
SPECTRAL = "spectral"


class ConfigurationError(ValueError):
    """Raised when sizes, tags, or parameters are inconsistent."""


class ConstraintViolation(ValueError):
    """Raised in strict mode when a zero-mode constraint is not met.

    The offending spectral mass is attached as the ``mass`` attribute.
    """

    def __init__(self, message, mass):
        super().__init__(message)
        self.mass = mass


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [-L/2, L/2) per dimension.

    Parameters
    ----------
    points : tuple of int
        Samples per dimension; each must be even and at least 8.
    lengths : tuple of float
        Physical period per dimension.
    """

    points: tuple
    lengths: tuple

    def __post_init__(self):
        pts = tuple(int(n) for n in np.atleast_1d(self.points))
        lens = tuple(float(l) for l in np.atleast_1d(self.lengths))
        if len(pts) not in (1, 2) or len(pts) != len(lens):
            raise ConfigurationError("grid must be 1D or 2D with matching lengths")
        for n in pts:
            if n < 8 or n % 2:
                raise ConfigurationError("points per dimension must be even and >= 8")
        for l in lens:
            if not l > 0:
                raise ConfigurationError("period lengths must be positive")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "lengths", lens)

    @property
    def dims(self):
        return len(self.points)

    @property
    def shape(self):
        return self.points

    def axis(self, d=0):
        """Physical nodes along dimension d: x_i = -L/2 + i L/N."""
        n, length = self.points[d], self.lengths[d]
        return -length / 2 + length * np.arange(n) / n

    def wavenumbers(self, d=0):
        """Angular wavenumbers 2*pi*m/L in FFT order along dimension d."""
        n, length = self.points[d], self.lengths[d]
        return 2 * np.pi * np.fft.fftfreq(n, d=length / n)

    def meshgrid(self):
        """Physical coordinate arrays (X,) or (X, Y) with x as the first axis."""
        return np.meshgrid(*(self.axis(d) for d in range(self.dims)), indexing="ij")

    def spectral_meshgrid(self):
        """Wavenumber arrays (KX,) or (KX, KY) matching array layout."""
        return np.meshgrid(
            *(self.wavenumbers(d) for d in range(self.dims)), indexing="ij"
        )

    @property
    def cell_volume(self):
        return float(np.prod([l / n for l, n in zip(self.lengths, self.points)]))


@dataclass(frozen=True)
class Field:
    """Sampled function on a grid, tagged physical or spectral."""

    grid: Grid
    values: np.ndarray
    space: str = PHYSICAL

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.shape != self.grid.shape:
            raise ConfigurationError(
                f"value shape {vals.shape} does not match grid {self.grid.shape}"
            )
        if self.space not in (PHYSICAL, SPECTRAL):
            raise ConfigurationError(f"unknown space tag {self.space!r}")
        object.__setattr__(self, "values", vals)

    @property
    def is_real(self):
        return not np.iscomplexobj(self.values)

    def with_values(self, values, space=None):
        return replace(self, values=np.asarray(values), space=space or self.space)


def from_function(grid, fn, *, dtype=None):
    """Sample a callable of the physical coordinates into a physical Field."""
    vals = np.asarray(fn(*grid.meshgrid()))
    vals = np.broadcast_to(vals, grid.shape).copy()
    if dtype is not None:
        vals = vals.astype(dtype)
    return Field(grid, vals, PHYSICAL)


def transform(f):
    """Map a Field to its spectral (or back to its physical) twin.

    The forward/inverse pair is numpy's unnormalized-forward FFT, so a plain
    round trip reproduces the samples to double-precision round-off and
    Parseval holds with the grid-weighted norms used by :func:`norm_l2`.
    """
    if f.space == PHYSICAL:
        return Field(f.grid, np.fft.fftn(f.values), SPECTRAL)
    out = np.fft.ifftn(f.values)
    return Field(f.grid, out, PHYSICAL)


def to_physical(f):
    return f if f.space == PHYSICAL else transform(f)


def to_spectral(f):
    return f if f.space == SPECTRAL else transform(f)


def norm_l2(f):
    """Grid-weighted L2 norm: the trapezoid quadrature of |f|^2 on the torus."""
    g = to_physical(f)
    return float(np.sqrt(np.sum(np.abs(g.values) ** 2) * g.grid.cell_volume))


def integrate_phys(f):
    """Quadrature of f over the torus (exact for band-limited integrands)."""
    g = to_physical(f)
    return complex(np.sum(g.values) * g.grid.cell_volume) if not g.is_real else float(
        np.sum(g.values) * g.grid.cell_volume
    )


def apply_multiplier(f, symbol, *, want_real=None):
    """Apply a Fourier multiplier: pointwise product in spectral space.

    Parameters
    ----------
    f : Field
        Input, in either space; output comes back in the same space.
    symbol : ndarray
        One entry per retained mode, shaped like the grid.
    want_real : bool, optional
        Force a real physical result by dropping the imaginary round-off
        residue.  Defaults to True when the input was real and the symbol
        table is real (a real even symbol preserves realness).
    """
    symbol = np.asarray(symbol)
    if symbol.shape != f.grid.shape:
        raise ConfigurationError("symbol table shape does not match grid")
    if np.any(np.isnan(symbol)):
        raise ConfigurationError("symbol table contains NaN")
    spec = to_spectral(f)
    out = Field(f.grid, spec.values * symbol, SPECTRAL)
    if f.space == SPECTRAL:
        return out
    phys = transform(out)
    if want_real is None:
        want_real = f.is_real and not np.iscomplexobj(symbol)
    if want_real:
        phys = phys.with_values(phys.values.real)
    return phys


def derivative(f, order=1, axis=0):
    """Spectral derivative along one axis.

    Odd orders zero the Nyquist mode (its sign is ambiguous under the
    symmetric wavenumber convention, and keeping it produces a spurious
    asymmetric mode on real data).
    """
    k = f.grid.wavenumbers(axis)
    ik = (1j * k) ** order
    if order % 2:
        ik[f.grid.points[axis] // 2] = 0.0
    shape = [1] * f.grid.dims
    shape[axis] = -1
    table = np.broadcast_to(ik.reshape(shape), f.grid.shape)
    # any pure derivative of a real field is real; the symbol being imaginary
    # (odd orders) would otherwise defeat the realness default
    want_real = f.is_real if f.space == PHYSICAL else None
    return apply_multiplier(f, table, want_real=want_real)


def zero_mode_mass(f, axis=0):
    """Relative spectral mass in the zero mode along `axis`.

    Returns max over transverse indices of |spectrum at k_axis = 0| divided by
    the total spectral norm (0 for the zero field).
    """
    spec = to_spectral(f)
    total = np.sqrt(np.sum(np.abs(spec.values) ** 2))
    if total == 0:
        return 0.0
    zero_slice = np.take(spec.values, 0, axis=axis)
    return float(np.max(np.abs(zero_slice)) / total)


def antiderivative_x(f, *, strict=False, tol=1e-10):
    """Regularized antiderivative in x: spectrum divided by (i k_x).

    Modes with k_x = 0 are projected to zero.  In strict mode the call fails
    with :class:`ConstraintViolation` when those modes carry relative mass
    above `tol`; in permissive mode they are silently removed, which is the
    discrete analogue of the zero-x-mean constraint the operator needs.
    """
    mass = zero_mode_mass(f, axis=0)
    if strict and mass > tol:
        raise ConstraintViolation(
            f"zero-mode mass {mass:.3e} exceeds tolerance {tol:.1e}", mass
        )
    k = f.grid.wavenumbers(0)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = np.where(k == 0, 0.0, 1.0 / np.where(k == 0, 1.0, 1j * k))
    shape = [1] * f.grid.dims
    shape[0] = -1
    return apply_multiplier(f, np.broadcast_to(inv.reshape(shape), f.grid.shape))


def dealias_mask(grid, rule=2 / 3):
    """Boolean retain-mask zeroing all modes with |index| > rule * N/2."""
    if not 0 < rule <= 1:
        raise ConfigurationError("dealias rule must lie in (0, 1]")
    mask = np.ones(grid.shape, bool)
    for d in range(grid.dims):
        n = grid.points[d]
        idx = np.abs(np.fft.fftfreq(n) * n)
        keep = idx <= rule * (n / 2)
        shape = [1] * grid.dims
        shape[d] = -1
        mask &= keep.reshape(shape)
    return mask


def dealias(f, rule=2 / 3):
    """Zero the high-frequency third (by default) of the spectrum."""
    mask = dealias_mask(f.grid, rule)
    spec = to_spectral(f)
    out = Field(f.grid, np.where(mask, spec.values, 0.0), SPECTRAL)
    if f.space == PHYSICAL:
        phys = transform(out)
        if f.is_real:
            phys = phys.with_values(phys.values.real)
        return phys
    return out
