"""Exception types shared across the package.

Two broad families matter to callers: configuration problems (bad model
files, mismatched dimensions, unsupported parameter combinations) and
numerical failures (non-convergence, singular operators, branch-cut hits).
The CLI maps them to exit codes 2 and 3 respectively.
"""

from __future__ import annotations


class ConfigError(ValueError):
    """Invalid configuration: bad model file, dimension mismatch, bad flags."""


class UnsupportedParametersError(ConfigError):
    """Parameter combination outside the domain of the requested map."""


class InsufficientHarmonicsError(ConfigError):
    """Requested harmonic cutoff exceeds what was computed."""


class NumericalError(RuntimeError):
    """Numerical failure in a dense linear-algebra kernel."""

    def __init__(self, message: str, condition_estimate: float | None = None):
        super().__init__(message)
        self.condition_estimate = condition_estimate


class SingularPropagatorError(NumericalError):
    """Propagator eigenvalue indistinguishable from zero; quasienergy undefined."""


class IllConditionedError(NumericalError):
    """Similarity metric too close to singular for a trustworthy residual."""


class BranchCutError(NumericalError):
    """Matrix-logarithm eigenvalue on the negative real axis; perturb and retry."""


class GaplessError(NumericalError):
    """Off-diagonal element vanished at a sampled momentum; winding undefined."""


class UnderResolvedDriveWarning(UserWarning):
    """Time step too coarse to resolve the drive (dt * omega > pi)."""
