"""Dispersion symbols and zero-order multipliers for the model catalog.

Every function accepts scalar or array wavenumber input and returns real
values; origin values are defined by continuity where a limit exists, and by
0 otherwise.  Two-dimensional multipliers take the two wavenumber components
separately so they can be broadcast over spectral meshgrids.
"""

from __future__ import annotations

import numpy as np

from .grid import ConfigurationError


class ParameterError(ConfigurationError):
    """Raised for out-of-range symbol parameters."""


def symbol_fkdv(xi, alpha):
    """Fractional dispersion |xi|^alpha; 0 at the origin for alpha > 0."""
    if alpha <= -1:
        raise ParameterError("fractional order must exceed -1")
    xi = np.asarray(xi, float)
    a = np.abs(xi)
    with np.errstate(divide="ignore"):
        out = np.where(a == 0, 0.0, np.power(np.where(a == 0, 1.0, a), alpha))
    return out if out.ndim else float(out)


def symbol_whitham(xi, beta=0.0):
    """Full water-wave phase speed (1+beta*xi^2)^(1/2) (tanh xi / xi)^(1/2)."""
    if beta < 0:
        raise ParameterError("surface-tension parameter must be nonnegative")
    xi = np.asarray(xi, float)
    with np.errstate(invalid="ignore"):
        ratio = np.where(xi == 0, 1.0, np.tanh(xi) / np.where(xi == 0, 1.0, xi))
    out = np.sqrt((1 + beta * xi**2)) * np.sqrt(ratio)
    return out if out.ndim else float(out)


def symbol_ilw(xi, delta, shifted=False):
    """Finite-depth symbol xi*coth(xi*delta); value 1/delta at the origin.

    With `shifted=True` the constant 1/delta is subtracted, which moves the
    transport term of the finite-depth model into the dispersive part.
    """
    if delta <= 0:
        raise ParameterError("depth parameter must be positive")
    xi = np.asarray(xi, float)
    z = xi * delta
    # xi coth(xi d) = |xi| (1 + 2/(e^{2|z|} - 1)); stable for large |z|.
    az = np.abs(z)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        small = az < 1e-8
        coth_term = np.where(
            small,
            1.0 / np.where(small, np.where(az == 0, 1.0, az), 1.0),
            1.0 + 2.0 / np.expm1(2 * np.where(small, 1.0, az)),
        )
    out = np.where(
        az < 1e-8,
        1.0 / delta + xi * z / (3 * delta) * delta,  # series: 1/d + d xi^2/3
        np.abs(xi) * coth_term,
    )
    out = np.where(az == 0, 1.0 / delta, out)
    if shifted:
        out = out - 1.0 / delta
    return out if out.ndim else float(out)


def symbol_ds2_riesz(xi1, xi2):
    """Second Riesz transform squared: -xi1^2/|xi|^2, 0 at the origin."""
    xi1 = np.asarray(xi1, float)
    xi2 = np.asarray(xi2, float)
    denom = xi1**2 + xi2**2
    out = np.where(denom == 0, 0.0, -(xi1**2) / np.where(denom == 0, 1.0, denom))
    return out if out.ndim else float(out)


def symbol_nv(xi1, xi2, which):
    """Zero-order multipliers 3(xi2^2-xi1^2)/|xi|^2 (L1) and 6 xi1 xi2/|xi|^2 (L2)."""
    xi1 = np.asarray(xi1, float)
    xi2 = np.asarray(xi2, float)
    denom = xi1**2 + xi2**2
    safe = np.where(denom == 0, 1.0, denom)
    if which == "L1":
        out = np.where(denom == 0, 0.0, 3 * (xi2**2 - xi1**2) / safe)
    elif which == "L2":
        out = np.where(denom == 0, 0.0, 6 * xi1 * xi2 / safe)
    else:
        raise ParameterError(f"unknown multiplier {which!r}; expected 'L1' or 'L2'")
    return out if out.ndim else float(out)


def resonance_chi(xi, xi1, eta, eta1, kp_sign):
    """Three-wave resonance function of the two-dimensional long-wave models.

    chi = 3*xi*xi1*(xi-xi1) - sign_term * (eta*xi1 - eta1*xi)^2 / (xi*xi1*(xi-xi1))

    `kp_sign=-1` selects the difference form (the sign family with lump
    solutions, where chi can vanish); `kp_sign=+1` selects the sum form, which
    is positive whenever the denominator is.
    """
    if kp_sign not in (-1, 1):
        raise ParameterError("kp_sign must be +1 or -1")
    xi = np.asarray(xi, float)
    denom = xi * xi1 * (xi - xi1)
    if np.any(denom == 0):
        raise ParameterError("degenerate resonance denominator xi*xi1*(xi-xi1) = 0")
    cross = (eta * xi1 - eta1 * xi) ** 2
    out = 3 * denom + kp_sign * cross / denom
    return out if np.ndim(out) else float(out)
