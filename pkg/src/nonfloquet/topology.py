"""Chiral-symmetry checks, half-period frames and winding numbers.

For a two-band drive obeying ``sigma_z H(-t) sigma_z = -H(t)`` the two
symmetric-frame Floquet operators are built from the half-period
propagators F = U(T/2, 0) and G = U(T, T/2) as U1 = F G and U2 = G F.
Both satisfy ``sigma_z U sigma_z = U^-1`` exactly (for Hermitian drives
they coincide with the adjoint construction
``U1 = C U(T,T/2)^+ C U(T,T/2)``), so the effective Hamiltonians
``H_eff = (i/T) log U`` are off-diagonal in the sublattice basis and
their couplings q(k) wind around the Brillouin zone by integer
multiples of 2 pi.  Gap invariants follow as ``nu_0 = (W1+W2)/2`` and
``nu_pi = (W1-W2)/2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BranchCutError, ConfigError, GaplessError, NumericalError
from .evolution import DEFAULT_SLICES, bloch_floquet
from .models import SIGMA_Z

__all__ = [
    "ChiralFrame",
    "WindingReport",
    "chiral_drive_check",
    "half_period_frame",
    "chiral_couplings",
    "winding_numbers",
    "winding_from_samples",
]


def chiral_drive_check(family, t_samples: int = 64, n_k: int = 64) -> float:
    """Max norm of ``sigma_z H(-t) sigma_z + H(t)`` over times and momenta.

    Vanishes when the off-diagonal Bloch components are even and the
    diagonal ones odd in t, which is what protects the chiral symmetry of
    the evolution operator.
    """
    period = getattr(family, "period", None)
    if period is None:
        raise ConfigError("model is not periodic")
    if hasattr(family, "bloch"):
        ks = np.linspace(0.0, 2 * np.pi, n_k, endpoint=False)
        sampler = lambda t: family.bloch(ks, t)
    else:
        if family.dim != 2:
            raise ConfigError("chiral_drive_check expects a two-band model")
        sampler = family.sample
    worst = 0.0
    for t in (np.arange(t_samples) + 0.5) * period / t_samples:
        Hp = sampler(t)
        Hm = sampler(-t)
        R = SIGMA_Z @ Hm @ SIGMA_Z + Hp
        worst = max(worst, float(np.abs(R).max()))
    return worst


def _log_eigenvalues(lam: np.ndarray, tol: float = 1e-12):
    on_cut = (lam.real < 0) & (np.abs(lam.imag) <= tol * np.abs(lam))
    if np.any(on_cut):
        raise BranchCutError("propagator eigenvalue on the log branch cut")
    return np.log(lam)


def _heff(U: np.ndarray, T: float) -> np.ndarray:
    lam, V = np.linalg.eig(U)
    logs = 1j / T * _log_eigenvalues(lam)
    return V @ np.diag(logs) @ np.linalg.inv(V)


@dataclass(frozen=True)
class ChiralFrame:
    """Half-period decomposition at one momentum."""

    U1: np.ndarray
    U2: np.ndarray
    Heff1: np.ndarray
    Heff2: np.ndarray
    offdiag_residual: float


def _frame_from_halves(F: np.ndarray, G: np.ndarray, T: float) -> ChiralFrame:
    U1 = F @ G
    U2 = G @ F
    H1 = _heff(U1, T)
    H2 = _heff(U2, T)
    res = max(abs(H1[0, 0]), abs(H1[1, 1]), abs(H2[0, 0]), abs(H2[1, 1]))
    return ChiralFrame(U1=U1, U2=U2, Heff1=H1, Heff2=H2, offdiag_residual=float(res))


def half_period_frame(family, k: float, slices: int = DEFAULT_SLICES) -> ChiralFrame:
    """Chiral frame (U1, U2, effective Hamiltonians) at momentum k.

    The effective Hamiltonians come from the eigendecomposition log with
    the principal branch; an eigenvalue on the negative real axis raises
    ``BranchCutError`` and the caller should perturb k.
    """
    T = family.period
    ks = np.asarray([k])
    F = bloch_floquet(family, ks, 0.0, T / 2, slices=slices)[0]
    G = bloch_floquet(family, ks, T / 2, T, slices=slices)[0]
    return _frame_from_halves(F, G, T)


@dataclass(frozen=True)
class WindingReport:
    """Winding numbers of the two chiral frames and the gap invariants.

    ``W1``/``W2`` are wound from the lower-left coupling of the effective
    Hamiltonians along ascending k; the upper-right entries wind
    oppositely for Hermitian frames and are recorded in
    ``upper_right_windings`` with ``entries_consistent`` flagging the
    expected opposition.  ``phase_accumulations`` holds the raw
    accumulated phases (rad).
    """

    W1: int
    W2: int
    nu0: float
    nu_pi: float
    phase_accumulations: tuple[float, float]
    k_points: int
    upper_right_windings: tuple[float, float]
    entries_consistent: bool


def winding_from_samples(q: np.ndarray) -> float:
    """Total unwrapped phase of closed-loop samples q(k), in turns.

    Nearest-branch increments; raises when a sample vanishes or an
    increment reaches pi (loop under-resolved).
    """
    q = np.asarray(q, dtype=complex)
    if np.any(np.abs(q) < 1e-12):
        raise GaplessError("coupling magnitude below 1e-12; winding undefined")
    steps = np.angle(np.roll(q, -1) / q)
    if np.any(np.abs(steps) >= np.pi * (1 - 1e-9)):
        raise NumericalError("phase step reached pi; refine the k grid")
    return float(steps.sum() / (2 * np.pi))


def chiral_couplings(family, Nk: int, slices: int = DEFAULT_SLICES):
    """Off-diagonal couplings of both chiral frames on a uniform k grid.

    Returns ``(ks, q1, q2, u1, u2)`` where q holds the lower-left and u
    the upper-right entries of the effective Hamiltonians.  A branch-cut
    hit at some k is retried at a half-step perturbed momentum.
    """
    T = family.period
    ks = 2 * np.pi * np.arange(Nk) / Nk

    def frames_at(kvals: np.ndarray):
        F = bloch_floquet(family, kvals, 0.0, T / 2, slices=slices)
        G = bloch_floquet(family, kvals, T / 2, T, slices=slices)
        return F, G

    F, G = frames_at(ks)
    q1 = np.empty(Nk, dtype=complex)
    q2 = np.empty(Nk, dtype=complex)
    u1 = np.empty(Nk, dtype=complex)
    u2 = np.empty(Nk, dtype=complex)
    for i in range(Nk):
        try:
            frame = _frame_from_halves(F[i], G[i], T)
        except BranchCutError:
            kp = ks[i] + np.pi / Nk  # half-step perturbation
            Fp, Gp = frames_at(np.asarray([kp]))
            frame = _frame_from_halves(Fp[0], Gp[0], T)
        q1[i], q2[i] = frame.Heff1[1, 0], frame.Heff2[1, 0]
        u1[i], u2[i] = frame.Heff1[0, 1], frame.Heff2[0, 1]
    return ks, q1, q2, u1, u2


def winding_numbers(family, Nk: int = 256, slices: int = DEFAULT_SLICES) -> WindingReport:
    """Winding numbers W1, W2 and gap invariants nu_0, nu_pi.

    Momenta are sampled on a uniform grid over [0, 2 pi); the grid is
    doubled (up to three times) if a phase increment reaches pi, and the
    accumulated phases must land on integers within 1e-6 turns.
    """
    if Nk < 64:
        raise ConfigError("Nk must be at least 64")

    last_err = None
    for trial in range(4):
        n = Nk * (2**trial)
        _, q1, q2, u1, u2 = chiral_couplings(family, n, slices=slices)
        try:
            w1, w2 = winding_from_samples(q1), winding_from_samples(q2)
            wu1, wu2 = winding_from_samples(u1), winding_from_samples(u2)
        except NumericalError as exc:
            if isinstance(exc, GaplessError):
                raise
            last_err = exc
            continue
        for w in (w1, w2):
            if abs(w - round(w)) > 1e-6:
                raise NumericalError(f"winding {w} not integral within 1e-6")
        W1, W2 = int(round(w1)), int(round(w2))
        return WindingReport(
            W1=W1, W2=W2, nu0=(W1 + W2) / 2, nu_pi=(W1 - W2) / 2,
            phase_accumulations=(2 * np.pi * w1, 2 * np.pi * w2),
            k_points=n,
            upper_right_windings=(wu1, wu2),
            entries_consistent=bool(abs(wu1 + w1) < 1e-6 and abs(wu2 + w2) < 1e-6),
        )
    raise last_err if last_err is not None else NumericalError("winding failed")
