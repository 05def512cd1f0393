"""Simulation toolkit for periodically driven non-Hermitian tight-binding
chains: time-ordered propagators and quasienergy spectra, non-unitary
temporal deformations with dynamical pseudo-Hermiticity checks, chiral
winding numbers, and frequency-space (extended-zone) Wannier-Stark
diagnostics, plus a CLI that writes delimited tables and figures."""

from . import deformation, diagnostics, evolution, freqspace, linalg, models, topology
from .errors import ConfigError, NumericalError

__all__ = [
    "linalg",
    "models",
    "evolution",
    "deformation",
    "topology",
    "freqspace",
    "diagnostics",
    "ConfigError",
    "NumericalError",
]

__version__ = "0.1.0"
