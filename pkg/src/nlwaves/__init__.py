"""Pseudo-spectral simulation and inverse-scattering tools for nonlocal
dispersive wave equations on periodic domains."""

from .grid import (
    ConfigurationError,
    ConstraintViolation,
    Field,
    Grid,
    from_function,
)
from .equations import EquationSpec
from .integrators import IntegratorConfig, Trajectory, integrate, linear_propagate
from .config import ExperimentConfig, load_run, run

__all__ = [
    "ConfigurationError",
    "ConstraintViolation",
    "EquationSpec",
    "ExperimentConfig",
    "Field",
    "Grid",
    "IntegratorConfig",
    "Trajectory",
    "from_function",
    "integrate",
    "linear_propagate",
    "load_run",
    "run",
]

__version__ = "0.1.0"
