"""Time-ordered propagators, Floquet operators, and spectral sweeps.

Propagation uses a midpoint product formula:
``U(t1, t0) = prod_j expm(H(t_mid_j), dt)``, second order in the slice
width.  One-period operators for a shifted starting time are assembled
through the similarity construction
``U(t0 + T, t0) = U(t0, 0) U(T, 0) U(t0, 0)^-1`` so the quasienergy
multiset is independent of the starting point to rounding accuracy;
piecewise-constant drives use exact per-segment exponentials instead.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, UnderResolvedDriveWarning
from .linalg import FloquetSpectrum, expm, expm_2x2_batch, fold_to_zone, quasienergies

__all__ = [
    "PropagatorRequest",
    "propagate",
    "floquet_operator",
    "floquet_spectrum",
    "bloch_floquet",
    "obc_sweep",
    "starting_point_study",
    "edge_mode_mask",
    "bulk_gaps",
    "parallel_map",
    "SweepRow",
    "StudyRow",
]

DEFAULT_SLICES = 4096


@dataclass(frozen=True)
class PropagatorRequest:
    model: object
    t0: float
    t1: float
    slices: int

    def __post_init__(self):
        if not self.t1 > self.t0:
            raise ConfigError("t1 must exceed t0")
        if self.slices < 1:
            raise ConfigError("slices must be at least 1")


def _warn_if_under_resolved(model, dt: float):
    period = getattr(model, "period", None)
    if period is not None and dt * (2 * np.pi / period) > np.pi:
        warnings.warn("time step too coarse for the drive (dt * omega > pi)",
                      UnderResolvedDriveWarning, stacklevel=3)


def _pairwise_product(factors: np.ndarray) -> np.ndarray:
    # time-ordered product factors[n-1] @ ... @ factors[0], reduced pairwise
    # so that matched compositions factor exactly at slice boundaries
    while factors.shape[0] > 1:
        m = factors.shape[0] // 2
        head = np.matmul(factors[1 : 2 * m : 2], factors[0 : 2 * m : 2])
        if factors.shape[0] % 2:
            factors = np.concatenate([head, factors[-1:]])
        else:
            factors = head
    return factors[0]


def _propagate_sampler(sample, dim: int, t0: float, t1: float, slices: int) -> np.ndarray:
    dt = (t1 - t0) / slices
    mids = t0 + (np.arange(slices) + 0.5) * dt
    if dim == 2:
        samples = np.stack([sample(t) for t in mids])
        return _pairwise_product(expm_2x2_batch(samples, dt))
    U = np.eye(dim, dtype=complex)
    for t in mids:
        U = expm(sample(t), dt) @ U
    return U


def propagate(req: PropagatorRequest) -> np.ndarray:
    """Time-ordered propagator U(t1, t0) by the midpoint product rule."""
    model = req.model
    _warn_if_under_resolved(model, (req.t1 - req.t0) / req.slices)
    return _propagate_sampler(model.sample, model.dim, req.t0, req.t1, req.slices)


def _segments_from(model, t_start: float) -> list[tuple[float, np.ndarray]] | None:
    segs = getattr(model, "constant_segments", None)
    if segs is None:
        return None
    base = segs()
    T = model.period
    tau = math.fmod(t_start, T)
    if tau < 0:
        tau += T
    # rotate/split the segment list so it covers [t_start, t_start + T]
    out = []
    acc = 0.0
    start_idx, offset = 0, 0.0
    for i, (d, H) in enumerate(base):
        if tau < acc + d - 1e-15 * T:
            start_idx, offset = i, tau - acc
            break
        acc += d
    else:
        start_idx, offset = 0, 0.0
    d0, H0 = base[start_idx]
    if d0 - offset > 1e-15 * T:
        out.append((d0 - offset, H0))
    for j in range(1, len(base)):
        out.append(base[(start_idx + j) % len(base)])
    if offset > 1e-15 * T:
        out.append((offset, H0))
    return out


def floquet_operator(model, t_start: float = 0.0, slices: int = DEFAULT_SLICES) -> np.ndarray:
    """One-period propagator U(t_start + T, t_start).

    Piecewise-constant models are integrated exactly segment by segment.
    For smooth drives with ``t_start != 0`` the operator is built as
    ``U(t_start, 0) U(T, 0) U(t_start, 0)^-1`` (a pure similarity), which
    keeps the eigenvalue multiset independent of the starting point.
    """
    period = getattr(model, "period", None)
    if period is None:
        raise ConfigError("model is not periodic")
    segs = _segments_from(model, t_start)
    if segs is not None:
        U = np.eye(model.dim, dtype=complex)
        for d, H in segs:
            U = expm(H, d) @ U
        return U
    T = period
    tau = math.fmod(t_start, T)
    if tau < 0:
        tau += T
    UT = _propagate_sampler(model.sample, model.dim, 0.0, T, slices)
    if tau == 0.0:
        return UT
    n0 = max(1, round(slices * tau / T))
    U0 = _propagate_sampler(model.sample, model.dim, 0.0, tau, n0)
    return U0 @ UT @ np.linalg.inv(U0)


def floquet_spectrum(model, t_start: float = 0.0, slices: int = DEFAULT_SLICES) -> FloquetSpectrum:
    """Quasienergy spectrum of the one-period propagator."""
    U = floquet_operator(model, t_start=t_start, slices=slices)
    return quasienergies(U, model.period)


def bloch_floquet(family, ks, t0: float = 0.0, t1: float | None = None,
                  slices: int = DEFAULT_SLICES) -> np.ndarray:
    """Batched momentum-space propagators U(k; t1, t0), shape (Nk, 2, 2).

    ``family`` must expose ``bloch(ks, t)`` vectorized over momenta; step
    protocols are integrated exactly, harmonic drives by the midpoint rule
    with closed-form 2x2 exponentials.
    """
    ks = np.asarray(ks)
    if t1 is None:
        t0, t1 = 0.0, family.period
    segs = getattr(family, "constant_segments", None)
    if segs is not None and t0 == 0.0 and np.isclose(t1 - t0, family.period):
        factors = [expm_2x2_batch(H, d) for d, H in segs(ks)]
        U = factors[0]
        for F in factors[1:]:
            U = np.matmul(F, U)
        return U
    dt = (t1 - t0) / slices
    mids = t0 + (np.arange(slices) + 0.5) * dt
    U = None
    for t in mids:
        F = expm_2x2_batch(family.bloch(ks, t), dt)
        U = F if U is None else np.matmul(F, U)
    return U


def parallel_map(fn, items):
    """Map preserving order; thread count capped by NONFLOQUET_THREADS."""
    items = list(items)
    env = os.environ.get("NONFLOQUET_THREADS")
    workers = int(env) if env else (os.cpu_count() or 1)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def bulk_gaps(pbc_re_eps: np.ndarray, T: float, min_width: float = 1e-6):
    """Gap intervals of the folded bulk spectrum around 0 and pi/T.

    Returns ``{center: (low, high)}`` in coordinates relative to each
    center; entries are omitted when the bulk leaves no gap wider than
    ``min_width``.
    """
    gaps = {}
    for center in (0.0, np.pi / T):
        rel = fold_to_zone(np.asarray(pbc_re_eps) - center, T)
        above = rel[rel > 0]
        below = rel[rel < 0]
        high = above.min() if above.size else np.pi / T
        low = below.max() if below.size else -np.pi / T
        if high - low > min_width:
            gaps[center] = (float(low), float(high))
    return gaps


def edge_mode_mask(spectrum: FloquetSpectrum, localization: np.ndarray,
                   pbc_spectrum: FloquetSpectrum, threshold_factor: float = 0.25,
                   min_gap: float = 1e-6) -> np.ndarray:
    """Edge-mode detector for open-boundary Floquet spectra.

    A state counts as an edge mode when its folded Re(eps) falls strictly
    inside a bulk gap (computed from the periodic-boundary companion,
    around both 0 and pi/T) and its localization factor exceeds
    ``threshold_factor * (1 - 1/dim)``.  The factor 0.25 admits the
    symmetric/antisymmetric combinations a near-degenerate pair forms
    across the two ends, whose participation ratio is half that of a
    single-end state.
    """
    T = spectrum.T
    gaps = bulk_gaps(pbc_spectrum.quasienergies.real, T, min_width=min_gap)
    dim = spectrum.dim
    threshold = threshold_factor * (1.0 - 1.0 / dim)
    mask = np.zeros(dim, dtype=bool)
    for center, (low, high) in gaps.items():
        rel = fold_to_zone(spectrum.quasienergies.real - center, T)
        pad = 1e-12
        mask |= (rel > low + pad) & (rel < high - pad)
    return mask & (np.asarray(localization) > threshold)


@dataclass(frozen=True)
class SweepRow:
    mu0: float
    spectrum: FloquetSpectrum
    localization: np.ndarray
    edge_modes: np.ndarray   # boolean mask aligned with the spectrum
    pbc_spectrum: FloquetSpectrum


def obc_sweep(model, mu0_grid, slices: int = DEFAULT_SLICES) -> list[SweepRow]:
    """Open-boundary spectra, localization factors and edge-mode flags per mu0."""
    from .diagnostics import localization_factor

    if getattr(model, "boundary", None) != "open":
        raise ConfigError("obc_sweep expects an open-boundary real-space model")

    def one(mu0: float) -> SweepRow:
        m_obc = replace(model, mu0=float(mu0))
        m_pbc = replace(m_obc, boundary="periodic")
        spec = floquet_spectrum(m_obc, slices=slices)
        pbc = floquet_spectrum(m_pbc, slices=slices)
        loc = localization_factor(spec.states).factors
        mask = edge_mode_mask(spec, loc, pbc)
        return SweepRow(mu0=float(mu0), spectrum=spec, localization=loc,
                        edge_modes=mask, pbc_spectrum=pbc)

    return parallel_map(one, mu0_grid)


@dataclass(frozen=True)
class StudyRow:
    phi: float
    spectrum: FloquetSpectrum
    localization: np.ndarray


def starting_point_study(model, phis, slices: int = DEFAULT_SLICES) -> list[StudyRow]:
    """Floquet spectra and localization for shifted starting phases.

    The driving period ``[0, T]`` is moved to ``[phi/omega, T + phi/omega]``;
    quasienergies agree across phi as multisets while the state
    localization may not.
    """
    from .diagnostics import localization_factor

    period = getattr(model, "period", None)
    if period is None:
        raise ConfigError("model is not periodic")
    omega = 2 * np.pi / period

    def one(phi: float) -> StudyRow:
        spec = floquet_spectrum(model, t_start=float(phi) / omega, slices=slices)
        loc = localization_factor(spec.states).factors
        return StudyRow(phi=float(phi), spectrum=spec, localization=loc)

    return parallel_map(one, phis)
