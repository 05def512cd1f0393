"""Non-unitary temporal deformations of driven models.

A deformation is a diagonal generator ``Gamma(t)`` with per-site entries
``gamma_j(t) = c_j + a_j t + sum_h [u_jh cos(h w t) + w_jh sin(h w t)]``
(complex coefficients, closed-form derivative).  Applying ``S = exp(Gamma)``
to a model produces the transformed sampler
``H'(t) = e^Gamma H e^-Gamma + i dGamma/dt``; the induced quasienergy
shift over one period is ``(i/T) (Gamma(T) - Gamma(0))`` per site.
Whether a given (model, Gamma) pair is consistent with a Hermitian
transformed model is measured by the dynamical pseudo-Hermiticity
residual built from ``theta1 = S^dagger S`` and ``theta2 = S^-1 dS/dt``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, IllConditionedError, SingularPropagatorError
from .evolution import DEFAULT_SLICES, floquet_spectrum
from .linalg import fold_to_zone, frobenius
from .models import SIGMA_X

__all__ = [
    "DeformationSpec",
    "TransformedModel",
    "PseudoHermResidual",
    "transform_model",
    "pseudo_hermiticity_residual",
    "generalized_shift",
    "spectra_shift_check",
    "pt_check",
    "pt_check_bloch",
    "pt_sigma_x",
    "bipartite_temporal_deformation",
    "bipartite_full_deformation",
]


@dataclass(frozen=True)
class DeformationSpec:
    """Diagonal deformation generator with harmonic time dependence.

    Coefficient arrays have one row per lattice site: ``const`` and
    ``linear`` are (n,), the cosine/sine tables are (n, H) for harmonics
    ``1..H`` of the base frequency.
    """

    omega: float
    const: np.ndarray
    linear: np.ndarray
    cos_coeffs: np.ndarray
    sin_coeffs: np.ndarray

    def __post_init__(self):
        if not self.omega > 0:
            raise ConfigError("deformation omega must be positive")
        for name in ("const", "linear", "cos_coeffs", "sin_coeffs"):
            object.__setattr__(self, name, np.atleast_1d(np.asarray(getattr(self, name), dtype=complex)))
        n = self.const.shape[0]
        cos2 = np.atleast_2d(self.cos_coeffs)
        sin2 = np.atleast_2d(self.sin_coeffs)
        if self.linear.shape != (n,) or cos2.shape[0] != n or sin2.shape[0] != n:
            raise ConfigError("deformation coefficient arrays disagree on site count")
        if cos2.shape != sin2.shape:
            raise ConfigError("cos/sin coefficient tables must have equal shape")
        object.__setattr__(self, "cos_coeffs", cos2)
        object.__setattr__(self, "sin_coeffs", sin2)

    @property
    def dim(self) -> int:
        return self.const.shape[0]

    def gamma(self, t: float) -> np.ndarray:
        h = np.arange(1, self.cos_coeffs.shape[1] + 1)
        ang = h * self.omega * t
        return (self.const + self.linear * t
                + self.cos_coeffs @ np.cos(ang) + self.sin_coeffs @ np.sin(ang))

    def gamma_dot(self, t: float) -> np.ndarray:
        h = np.arange(1, self.cos_coeffs.shape[1] + 1)
        ang = h * self.omega * t
        w = h * self.omega
        return (self.linear
                - self.cos_coeffs @ (w * np.sin(ang)) + self.sin_coeffs @ (w * np.cos(ang)))

    def negated(self) -> "DeformationSpec":
        return DeformationSpec(omega=self.omega, const=-self.const, linear=-self.linear,
                               cos_coeffs=-self.cos_coeffs, sin_coeffs=-self.sin_coeffs)


def bipartite_temporal_deformation(cells: int, omega: float) -> DeformationSpec:
    """Site-independent deformation mapping the temporally deformed chain
    back to its Hermitian form: ``gamma_a = +i w t/2 - cos(w t)``,
    ``gamma_b = -i w t/2 + cos(w t)`` on each cell."""
    n = 2 * cells
    linear = np.tile([0.5j * omega, -0.5j * omega], cells)
    cos1 = np.tile([-1.0, 1.0], cells).reshape(n, 1)
    return DeformationSpec(omega=omega, const=np.zeros(n), linear=linear,
                           cos_coeffs=cos1, sin_coeffs=np.zeros((n, 1)))


def bipartite_full_deformation(cells: int, omega: float, beta: float) -> DeformationSpec:
    """Spatial-temporal deformation mapping the asymmetric non-Hermitian
    chain to its Hermitian counterpart: the temporal part above plus the
    spatial gauge ``beta*j`` on a-sites and ``beta*(j+1)`` on b-sites of
    cell j (0-based)."""
    base = bipartite_temporal_deformation(cells, omega)
    j = np.arange(cells, dtype=float)
    const = np.empty(2 * cells, dtype=complex)
    const[0::2] = beta * j
    const[1::2] = beta * (j + 1)
    return DeformationSpec(omega=omega, const=const, linear=base.linear,
                           cos_coeffs=base.cos_coeffs, sin_coeffs=base.sin_coeffs)


@dataclass(frozen=True)
class TransformedModel:
    """Model wrapper whose sampler is the deformed Hamiltonian."""

    base: object
    gamma: DeformationSpec
    metadata: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def period(self):
        return self.base.period

    def sample(self, t: float) -> np.ndarray:
        g = self.gamma.gamma(t)
        H = self.base.sample(t)
        out = np.exp(g[:, None] - g[None, :]) * H
        out[np.diag_indices_from(out)] += 1j * self.gamma.gamma_dot(t)
        return out


def transform_model(model, gamma: DeformationSpec) -> TransformedModel:
    """Derived model sampling ``e^Gamma H e^-Gamma + i dGamma/dt``.

    The period is preserved exactly when the linear coefficients differ
    between any two sites only by integer multiples of ``i omega``; the
    check result is recorded in the metadata.
    """
    if gamma.dim != model.dim:
        raise ConfigError(f"deformation dimension {gamma.dim} != model dimension {model.dim}")
    period = getattr(model, "period", None)
    preserved = True
    if period is not None:
        diff = gamma.linear[:, None] - gamma.linear[None, :]
        preserved = bool(np.all(np.abs(np.exp(diff * period) - 1.0) < 1e-10))
    return TransformedModel(base=model, gamma=gamma,
                            metadata={"period_preserved": preserved})


@dataclass(frozen=True)
class PseudoHermResidual:
    """Worst-case dynamical pseudo-Hermiticity mismatch over sampled times.

    ``theta1``/``theta2`` are stored at the worst sampled time.
    """

    theta1: np.ndarray
    theta2: np.ndarray
    residual_norm: float
    sampled_times: np.ndarray


def pseudo_hermiticity_residual(model, gamma: DeformationSpec, times) -> PseudoHermResidual:
    """Residual of ``H+ - th1 H th1^-1 = i (th2+ + th1 th2 th1^-1)``.

    For a diagonal generator ``th1 = exp(2 Re Gamma)`` and
    ``th2 = dGamma/dt``; the residual is normalized by ``max(1, |H|_F)``
    and maximized over the supplied times.
    """
    if gamma.dim != model.dim:
        raise ConfigError("deformation dimension mismatch")
    times = np.asarray(list(times), dtype=float)
    worst, worst_t = -1.0, times[0]
    for t in times:
        g = gamma.gamma(t)
        spread = 2 * (g.real.max() - g.real.min())
        if np.exp(spread) > 1e12:
            raise IllConditionedError("theta1 condition number exceeds 1e12",
                                      condition_estimate=float(np.exp(spread)))
        H = model.sample(t)
        th1 = np.exp(2 * g.real)
        gd = gamma.gamma_dot(t)
        lhs = H.conj().T - (th1[:, None] / th1[None, :]) * H
        rhs = 1j * np.diag(gd.conj() + gd)  # th1 th2 th1^-1 = th2 for diagonal th2
        r = frobenius(lhs - rhs) / max(1.0, frobenius(H))
        if r > worst:
            worst, worst_t = r, t
    g = gamma.gamma(worst_t)
    return PseudoHermResidual(theta1=np.diag(np.exp(2 * g.real)),
                              theta2=np.diag(gamma.gamma_dot(worst_t)),
                              residual_norm=float(worst), sampled_times=times)


def generalized_shift(gamma: DeformationSpec, T: float) -> np.ndarray:
    """Per-site quasienergy shift ``(i/T) (gamma(T) - gamma(0))``."""
    if not T > 0:
        raise ConfigError("T must be positive")
    return 1j / T * (gamma.gamma(T) - gamma.gamma(0.0))


def _folded_sorted(eps: np.ndarray, T: float, center: float) -> np.ndarray:
    z = fold_to_zone(eps.real, T, center=center) + 1j * eps.imag
    return z[np.lexsort((z.imag, z.real))]


def spectra_shift_check(model_a, model_b, shift: complex,
                        slices: int = DEFAULT_SLICES) -> float:
    """Largest deviation between the spectrum of A and the shifted spectrum of B.

    Both quasienergy multisets are folded to the zone, sorted by
    (Re, Im) and compared pairwise.  The comparison is repeated with the
    fold seam rotated by a quarter zone to keep states sitting exactly on
    the zone edge from splitting the sort, and the smaller deviation is
    returned.
    """
    if model_a.dim != model_b.dim:
        raise ConfigError("models differ in dimension")
    Ta, Tb = model_a.period, model_b.period
    if abs(Ta - Tb) > 1e-12 * max(Ta, Tb):
        raise ConfigError("models differ in period")
    eps_a = floquet_spectrum(model_a, slices=slices).quasienergies
    eps_b = floquet_spectrum(model_b, slices=slices).quasienergies + shift
    devs = []
    for center in (0.0, np.pi / (2 * Ta)):
        za = _folded_sorted(eps_a, Ta, center)
        zb = _folded_sorted(eps_b, Ta, center)
        devs.append(float(np.abs(za - zb).max()))
    return min(devs)


def pt_sigma_x(cells: int) -> np.ndarray:
    """Sublattice-swap parity: direct sum of sigma_x blocks."""
    return np.kron(np.eye(cells), SIGMA_X)


def pt_check(U: np.ndarray, P: np.ndarray) -> float:
    """Residual of ``P conj(U) P^-1 = U^-1`` (antiunitary part = conjugation).

    A small residual, together with eigenvector self-consistency under
    the antiunitary symmetry, implies real quasienergies.
    """
    U = np.asarray(U, dtype=complex)
    P = np.asarray(P, dtype=complex)
    if U.shape != P.shape or U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise ConfigError("U and P must be square matrices of equal dimension")
    if frobenius(P.conj().T @ P - np.eye(P.shape[0])) > 1e-10 * P.shape[0]:
        raise ConfigError("P must be unitary")
    try:
        U_inv = np.linalg.inv(U)
        P_inv = np.linalg.inv(P)
    except np.linalg.LinAlgError as exc:
        raise SingularPropagatorError(f"singular propagator: {exc}") from exc
    return frobenius(P @ U.conj() @ P_inv - U_inv) / frobenius(U)


def pt_check_bloch(family, k, P: np.ndarray | None = None,
                   slices: int = DEFAULT_SLICES, map_momentum: bool = False) -> float:
    """PT residual for a momentum-space model at Bloch momentum k.

    With ``map_momentum`` the parity also reflects k -> -k, i.e. the
    conjugated operator is taken at the opposite momentum (off by
    default; the sublattice-swap reading needs no momentum reversal).
    """
    from .evolution import floquet_operator

    if P is None:
        P = pt_sigma_x(1)
    U = floquet_operator(family.at_momentum(k) if hasattr(family, "at_momentum") else family,
                         slices=slices)
    if map_momentum:
        mk = -np.asarray(k)
        Um = floquet_operator(family.at_momentum(mk) if hasattr(family, "at_momentum") else family,
                              slices=slices)
        try:
            return frobenius(P @ Um.conj() @ np.linalg.inv(P) - np.linalg.inv(U)) / frobenius(U)
        except np.linalg.LinAlgError as exc:
            raise SingularPropagatorError(f"singular propagator: {exc}") from exc
    return pt_check(U, P)
