"""Dense complex linear-algebra kernels.

Everything downstream (propagators, effective Hamiltonians, Sambe
operators) is built on three operations: the unitary-generator matrix
exponential ``expm``, the general non-normal eigendecomposition ``eig``,
and the principal-branch quasienergy extraction ``quasienergies``.
Matrices are plain ``numpy`` complex arrays; all functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, NumericalError, SingularPropagatorError

__all__ = [
    "expm",
    "expm_2x2_batch",
    "eig",
    "quasienergies",
    "fold_to_zone",
    "frobenius",
    "is_hermitian",
    "SpectralDecomposition",
    "FloquetSpectrum",
]

# Truncation orders for the Taylor core and the largest 1-norm each order
# resolves to ~1e-16; the scaled norm never exceeds 0.5.
_TAYLOR_ORDERS = ((4, 1.6e-3), (6, 1.7e-2), (8, 6.9e-2), (10, 0.17), (13, 0.43), (16, 0.5))


def _check_square(A: np.ndarray, name: str = "matrix") -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ConfigError(f"{name} must be square, got shape {A.shape}")
    return A


def expm(A: np.ndarray, dt: float = 1.0) -> np.ndarray:
    """Evolution factor ``exp(-i * A * dt)``.

    Scaling-and-squaring with a truncated-series core: the matrix is
    halved until its 1-norm is at most 0.5, the series order is picked
    from a fixed table, and the result is squared back up.  Relative
    accuracy is ~1e-12 or better for ``norm(A * dt) <= 50``.

    Parameters
    ----------
    A : (n, n) array_like
        Generator (typically a Hamiltonian sample).
    dt : float
        Time step; the exponent is ``-1j * A * dt``.
    """
    A = _check_square(A)
    if not np.isfinite(dt):
        raise ConfigError("dt must be finite")
    if not np.all(np.isfinite(A)):
        raise ConfigError("matrix contains NaN or Inf entries")
    X = (-1j * dt) * A
    n = X.shape[0]
    norm = np.linalg.norm(X, 1)
    if norm == 0.0:
        return np.eye(n, dtype=complex)
    squarings = max(0, int(np.ceil(np.log2(norm / 0.5))))
    Xs = X / (2.0**squarings)
    scaled = norm / (2.0**squarings)
    order = next(m for m, theta in _TAYLOR_ORDERS if scaled <= theta)
    E = np.eye(n, dtype=complex) + Xs
    term = Xs
    for k in range(2, order + 1):
        term = term @ Xs / k
        E += term
    for _ in range(squarings):
        E = E @ E
    return E


def expm_2x2_batch(H: np.ndarray, dt: float) -> np.ndarray:
    """Closed-form ``exp(-i * H * dt)`` for a batch of 2x2 matrices.

    Splits each matrix into trace and traceless parts; the traceless
    part D satisfies ``D @ D = m^2 * I`` so the exponential is
    ``cos(m dt) I - i sin(m dt)/m D``.  Exact for non-Hermitian input
    (``m`` is then complex).  ``H`` has shape (..., 2, 2).
    """
    H = np.asarray(H, dtype=complex)
    c = 0.5 * (H[..., 0, 0] + H[..., 1, 1])
    D = H - c[..., None, None] * np.eye(2)
    m = np.sqrt(D[..., 0, 0] * D[..., 1, 1] - D[..., 0, 1] * D[..., 1, 0] + 0j)
    m = 1j * m  # D @ D = -det(D) I for traceless D; fold the sign into m
    small = np.abs(m) < 1e-150
    msafe = np.where(small, 1.0, m)
    sinc = np.where(small, dt, np.sin(msafe * dt) / msafe)
    out = np.cos(m * dt)[..., None, None] * np.eye(2) - 1j * sinc[..., None, None] * D
    return np.exp(-1j * c * dt)[..., None, None] * out


@dataclass(frozen=True)
class SpectralDecomposition:
    """Right eigenpairs of a dense (generally non-normal) matrix.

    Eigenvalues are sorted by real part, ties broken by imaginary part;
    eigenvector columns are unit-normalized and follow the same order.
    ``condition_estimate`` is the condition number of the eigenvector
    matrix, a proxy for how trustworthy the residual bound is.
    """

    eigenvalues: np.ndarray
    right_eigenvectors: np.ndarray
    condition_estimate: float


def eig(A: np.ndarray) -> SpectralDecomposition:
    """Eigendecomposition with deterministic ordering.

    Delegates to LAPACK's QR iteration on the Hessenberg form and wraps
    the result; a convergence failure surfaces as ``NumericalError``
    carrying the condition estimate.
    """
    A = _check_square(A)
    if not np.all(np.isfinite(A)):
        raise ConfigError("matrix contains NaN or Inf entries")
    try:
        lam, V = np.linalg.eig(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}", condition_estimate=float("inf")) from exc
    order = np.lexsort((lam.imag, lam.real))
    lam = lam[order]
    V = V[:, order]
    V = V / np.linalg.norm(V, axis=0, keepdims=True)
    with np.errstate(all="ignore"):
        cond = float(np.linalg.cond(V))
    return SpectralDecomposition(eigenvalues=lam, right_eigenvectors=V, condition_estimate=cond)


@dataclass(frozen=True)
class FloquetSpectrum:
    """Quasienergies and Floquet states of a one-period propagator.

    ``quasienergies[j]`` corresponds to the eigenvector column
    ``states[:, j]``; real parts live in the zone
    ``(zone_center - pi/T, zone_center + pi/T]``.
    """

    quasienergies: np.ndarray
    states: np.ndarray
    T: float
    zone_center: float = 0.0
    metadata: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.states.shape[0]


def quasienergies(U: np.ndarray, T: float) -> FloquetSpectrum:
    """Quasienergy spectrum of a one-period propagator.

    Inverts ``lambda = exp(-i eps T)`` through the principal logarithm:
    ``Re eps`` falls in ``(-pi/T, pi/T]`` (an eigenvalue exactly on the
    negative real axis maps to ``+pi/T``) and ``Im eps = ln|lambda| / T``,
    negative for decaying states.  Pairs are sorted by ``(Re, Im)``.
    """
    if not T > 0:
        raise ConfigError("period T must be positive")
    dec = eig(U)
    lam = dec.eigenvalues
    mod = np.abs(lam)
    if np.any(mod < 1e-300):
        raise SingularPropagatorError("propagator has a (numerically) zero eigenvalue")
    ang = np.angle(lam)
    ang = np.where(ang == np.pi, -np.pi, ang)  # put the branch edge at +pi/T
    eps = -ang / T + 1j * np.log(mod) / T
    order = np.lexsort((eps.imag, eps.real))
    return FloquetSpectrum(quasienergies=eps[order], states=dec.right_eigenvectors[:, order], T=T)


def fold_to_zone(x: np.ndarray | float, T: float, center: float = 0.0):
    """Fold real quasienergies into ``(center - pi/T, center + pi/T]``."""
    width = 2.0 * np.pi / T
    return center + width / 2 - np.mod(center + width / 2 - np.asarray(x), width)


def frobenius(A: np.ndarray) -> float:
    """Frobenius norm as a plain float."""
    return float(np.linalg.norm(A))


def is_hermitian(A: np.ndarray, tol: float = 1e-10) -> bool:
    """Relative Frobenius test ``|A - A†| / max(1, |A|) < tol``."""
    A = np.asarray(A)
    return frobenius(A - A.conj().T) / max(1.0, frobenius(A)) < tol
