"""Catalog of time-periodic lattice models.

Three families: a harmonically driven bipartite chain (with asymmetric
non-Hermitian tunneling, its Hermitian counterpart, and a temporally
deformed intermediate), a stepwise two-level quench protocol, and a
static Stark chain with asymmetric hopping.  Every model exposes a pure
sampler ``t -> H(t)`` plus dimension/period/boundary metadata; the chain
and quench families additionally expose a Bloch sampler ``(k, t) -> 2x2``
vectorized over momentum.

Real-space sublattice ordering is ``(a_1, b_1, a_2, b_2, ...)`` so the
chiral operator is a direct sum of sigma_z blocks.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import ConfigError, UnsupportedParametersError

__all__ = [
    "DriveSpec",
    "BipartiteChainSpec",
    "QuenchStep",
    "StepQuenchSpec",
    "StarkChainSpec",
    "MomentumSlice",
    "sample_hamiltonian",
    "hermitian_counterpart_params",
    "counterpart_of",
    "seven_step_quench",
    "chiral_operator",
    "load_model",
    "model_from_dict",
]

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)

_CHAIN_VARIANTS = ("non_hermitian", "hermitian_counterpart", "temporal_only_deformed")
_BOUNDARIES = ("open", "periodic")


@dataclass(frozen=True)
class DriveSpec:
    """Harmonic drive: angular frequency and a constant phase offset."""

    omega: float
    phase: float = 0.0

    def __post_init__(self):
        if not self.omega > 0:
            raise ConfigError("drive omega must be positive")

    @property
    def period(self) -> float:
        return 2.0 * np.pi / self.omega


@dataclass(frozen=True)
class BipartiteChainSpec:
    """Driven bipartite chain in one of three variants.

    ``non_hermitian`` uses (r1, r2, v, q1, q2, mu0): intra-cell hoppings
    ``-r1 exp(-i th + 2 cos th)`` / ``-r2 exp(+i th - 2 cos th)``,
    inter-cell sublattice-mixing ``v exp(+-(i th - 2 cos th))``, same-
    sublattice hoppings ``(q1|q2) sin th`` with opposite sign on the b
    sublattice, and complex on-site potential
    ``mu = (mu0 + i omega) sin th - omega/2`` (minus on a, plus on b),
    where ``th = omega t + phase``.

    ``hermitian_counterpart`` uses (t1, t2, p, mu0): the static SSH-type
    hoppings ``-t1`` / ``-t2`` plus drives ``p sin th`` and
    ``-mu0 sin th`` arranged so the Bloch matrix is
    ``d . sigma`` with ``d_x = -t1 - t2 cos k``, ``d_y = -t2 sin k``,
    ``d_z = (2 p cos k - mu0) sin th``.

    ``temporal_only_deformed`` is the non-Hermitian model reached from
    the counterpart by a purely temporal (site-independent) non-unitary
    deformation: counterpart amplitudes (t1, t2, p, mu0) but with the
    oscillating tunneling envelopes and complex potential of the
    non-Hermitian form.
    """

    L: int
    boundary: str
    drive: DriveSpec
    variant: str
    r1: float = 0.0
    r2: float = 0.0
    v: float = 0.0
    q1: float = 0.0
    q2: float = 0.0
    t1: float = 0.0
    t2: float = 0.0
    p: float = 0.0
    mu0: float = 0.0

    def __post_init__(self):
        if self.L < 1:
            raise ConfigError("L must be at least 1")
        if self.boundary not in _BOUNDARIES:
            raise ConfigError(f"unknown boundary {self.boundary!r}")
        if self.variant not in _CHAIN_VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}")

    @property
    def dim(self) -> int:
        return 2 * self.L

    @property
    def period(self) -> float:
        return self.drive.period

    def _coeffs(self, t: float) -> dict:
        om = self.drive.omega
        th = om * t + self.drive.phase
        s, c = np.sin(th), np.cos(th)
        if self.variant == "non_hermitian":
            env = np.exp(-1j * th + 2 * c)
            return dict(
                f1=-self.r1 * env, f2=-self.r2 / env,
                g1=self.v / env, g2=self.v * env,
                p1=self.q1 * s, p2=self.q2 * s,
                mu=(self.mu0 + 1j * om) * s - om / 2,
            )
        if self.variant == "temporal_only_deformed":
            env = np.exp(-1j * th + 2 * c)
            return dict(
                f1=-self.t1 * env, f2=-self.t1 / env,
                g1=-self.t2 / env, g2=-self.t2 * env,
                p1=self.p * s, p2=self.p * s,
                mu=(self.mu0 + 1j * om) * s - om / 2,
            )
        return dict(  # hermitian_counterpart
            f1=-self.t1, f2=-self.t1,
            g1=-self.t2, g2=-self.t2,
            p1=self.p * s, p2=self.p * s,
            mu=self.mu0 * s,
        )

    def sample(self, t: float) -> np.ndarray:
        """Real-space Hamiltonian matrix at time t."""
        co = self._coeffs(t)
        L = self.L
        H = np.zeros((2 * L, 2 * L), dtype=complex)
        ia = 2 * np.arange(L)
        ib = ia + 1
        H[ia, ib] = co["f1"]
        H[ib, ia] = co["f2"]
        H[ia, ia] = -co["mu"]
        H[ib, ib] = +co["mu"]
        if L > 1 or self.boundary == "periodic":
            j = np.arange(L if self.boundary == "periodic" else L - 1)
            jp = (j + 1) % L
            H[ib[j], ia[jp]] += co["g1"]
            H[ia[jp], ib[j]] += co["g2"]
            H[ia[j], ia[jp]] += co["p1"]
            H[ia[jp], ia[j]] += co["p2"]
            H[ib[j], ib[jp]] += -co["p1"]
            H[ib[jp], ib[j]] += -co["p2"]
        return H

    def bloch(self, k, t: float) -> np.ndarray:
        """Momentum-space 2x2 Hamiltonian at time t; k may be an array."""
        co = self._coeffs(t)
        k = np.asarray(k, dtype=float)
        ek = np.exp(1j * k)
        same = co["p1"] * ek + co["p2"] / ek
        H = np.empty(k.shape + (2, 2), dtype=complex)
        H[..., 0, 0] = -co["mu"] + same
        H[..., 1, 1] = +co["mu"] - same
        H[..., 0, 1] = co["f1"] + co["g2"] / ek
        H[..., 1, 0] = co["f2"] + co["g1"] * ek
        return H

    def at_momentum(self, k: float) -> "MomentumSlice":
        return MomentumSlice(family=self, k=float(k))


@dataclass(frozen=True)
class MomentumSlice:
    """Fixed-momentum view of a chain family: a two-band model in t."""

    family: BipartiteChainSpec
    k: float

    @property
    def dim(self) -> int:
        return 2

    @property
    def period(self) -> float:
        return self.family.period

    @property
    def drive(self) -> DriveSpec:
        return self.family.drive

    def sample(self, t: float) -> np.ndarray:
        return self.family.bloch(self.k, t)


@dataclass(frozen=True)
class QuenchStep:
    duration: float
    J1: complex
    J2: complex
    b: tuple[float, float]

    def __post_init__(self):
        if not self.duration > 0:
            raise ConfigError("step duration must be positive")


@dataclass(frozen=True)
class StepQuenchSpec:
    """Stepwise-driven two-level model in 2D momentum space.

    During step n the Hamiltonian is
    ``-(J1_n exp(i b_n . k) sigma_+ + J2_n exp(-i b_n . k) sigma_-)
    + gamma_z sigma_z``; exactly one step is active at a time and the
    durations sum to the period.
    """

    steps: tuple[QuenchStep, ...]
    gamma_z: complex = 0.0
    k: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not self.steps:
            raise ConfigError("at least one quench step required")

    @property
    def dim(self) -> int:
        return 2

    @property
    def period(self) -> float:
        return float(sum(s.duration for s in self.steps))

    def step_at(self, t: float) -> QuenchStep:
        tau = math.fmod(t, self.period)
        if tau < 0:
            tau += self.period
        acc = 0.0
        for s in self.steps:
            acc += s.duration
            if tau < acc:
                return s
        return self.steps[-1]

    def step_matrix(self, step: QuenchStep, k2) -> np.ndarray:
        k2 = np.asarray(k2, dtype=float)
        phi = k2[..., 0] * step.b[0] + k2[..., 1] * step.b[1]
        H = np.zeros(phi.shape + (2, 2), dtype=complex)
        H[..., 0, 1] = -step.J1 * np.exp(1j * phi)
        H[..., 1, 0] = -step.J2 * np.exp(-1j * phi)
        H[..., 0, 0] = self.gamma_z
        H[..., 1, 1] = -self.gamma_z
        return H

    def bloch(self, k2, t: float) -> np.ndarray:
        return self.step_matrix(self.step_at(t), k2)

    def sample(self, t: float) -> np.ndarray:
        return self.bloch(np.asarray(self.k), t)

    def constant_segments(self, k2=None) -> list[tuple[float, np.ndarray]]:
        """Piecewise-constant decomposition [(duration, H), ...] over one period."""
        k2 = np.asarray(self.k if k2 is None else k2, dtype=float)
        return [(s.duration, self.step_matrix(s, k2)) for s in self.steps]

    def at_momentum(self, k2) -> "StepQuenchSpec":
        return replace(self, k=(float(k2[0]), float(k2[1])))


@dataclass(frozen=True)
class StarkChainSpec:
    """Static chain with asymmetric hopping and a linear on-site ramp.

    ``H[l, l+1] = tL``, ``H[l+1, l] = tR`` (open ends) and
    ``H[l, l] = alpha * l`` with sites numbered 1..N.
    """

    N: int
    tL: float
    tR: float
    alpha: float

    def __post_init__(self):
        if self.N < 2:
            raise ConfigError("N must be at least 2")
        if not (self.tL > 0 and self.tR > 0):
            raise ConfigError("tL and tR must be positive")

    @property
    def dim(self) -> int:
        return self.N

    period = None  # static model

    def sample(self, t: float = 0.0) -> np.ndarray:
        H = np.zeros((self.N, self.N), dtype=complex)
        idx = np.arange(self.N - 1)
        H[idx, idx + 1] = self.tL
        H[idx + 1, idx] = self.tR
        H[np.arange(self.N), np.arange(self.N)] = self.alpha * np.arange(1, self.N + 1)
        return H


def sample_hamiltonian(model, t: float) -> np.ndarray:
    """Evaluate a model's sampler at time t (thin delegating wrapper)."""
    if not np.isfinite(t):
        raise ConfigError("t must be finite")
    return model.sample(t)


def hermitian_counterpart_params(r1, r2, v, q1, q2):
    """Parameters (t1, t2, p, beta) of the Hermitian counterpart chain.

    The spatial gauge exponent is ``beta = ln sqrt(r1/r2)``; the
    counterpart amplitudes are ``t1 = sqrt(r1 r2)``, ``t2 = -v`` and
    ``p = sign(q1) sqrt(q1 q2)``.  Requires ``r1 r2 > 0`` and
    ``q1 q2 > 0`` (equal signs), otherwise the gauge is undefined.
    """
    if not r1 * r2 > 0:
        raise UnsupportedParametersError("r1*r2 must be positive")
    if not q1 * q2 > 0 or np.sign(q1) != np.sign(q2):
        raise UnsupportedParametersError("q1 and q2 must share a sign (gauge undefined)")
    t1 = math.sqrt(r1 * r2)
    t2 = -v
    p = math.copysign(math.sqrt(q1 * q2), q1)
    beta = 0.5 * math.log(r1 / r2)
    return t1, t2, p, beta


def counterpart_of(spec: BipartiteChainSpec) -> BipartiteChainSpec:
    """Hermitian-counterpart spec of a non-Hermitian chain spec."""
    if spec.variant != "non_hermitian":
        raise ConfigError("counterpart_of expects the non_hermitian variant")
    t1, t2, p, _ = hermitian_counterpart_params(spec.r1, spec.r2, spec.v, spec.q1, spec.q2)
    return replace(spec, variant="hermitian_counterpart", t1=t1, t2=t2, p=p,
                   r1=0.0, r2=0.0, v=0.0, q1=0.0, q2=0.0)


def seven_step_quench(J: complex = 7 * np.pi / 2, T: float = 1.0, r: float = 0.0,
                      r_steps: tuple[int, ...] = (1,), gamma_z: complex = 0.0,
                      k=(0.0, 0.0)) -> StepQuenchSpec:
    """Seven-step protocol with heptagonal bond vectors and equal durations.

    Bond vectors default to ``b_n = (cos(2 pi n / 7), sin(2 pi n / 7))``
    for n = 1..7, each step lasting T/7.  ``r`` adds asymmetric tunneling
    ``J1 = J + r``, ``J2 = J - r`` on the 1-based steps in ``r_steps``.
    """
    steps = []
    for n in range(1, 8):
        asym = r if n in r_steps else 0.0
        steps.append(QuenchStep(
            duration=T / 7,
            J1=J + asym,
            J2=J - asym,
            b=(np.cos(2 * np.pi * n / 7), np.sin(2 * np.pi * n / 7)),
        ))
    return StepQuenchSpec(steps=tuple(steps), gamma_z=gamma_z, k=(float(k[0]), float(k[1])))


def chiral_operator(L: int) -> np.ndarray:
    """Direct sum of sigma_z blocks over L cells."""
    return np.kron(np.eye(L), SIGMA_Z)


# ---------------------------------------------------------------------------
# model files
# ---------------------------------------------------------------------------

def _as_complex(value, key: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2:
        return complex(value[0], value[1])
    raise ConfigError(f"{key} must be a number or a [re, im] pair")


def _require_keys(d: dict, required: set, optional: set, where: str):
    keys = set(d)
    missing = required - keys
    unknown = keys - required - optional
    if missing:
        raise ConfigError(f"{where}: missing keys {sorted(missing)}")
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")


def model_from_dict(doc: dict):
    """Build a model from its JSON document form.  Unknown keys are rejected."""
    if not isinstance(doc, dict):
        raise ConfigError("model document must be a JSON object")
    kind = doc.get("model")
    if kind == "bipartite_chain":
        _require_keys(doc, {"model", "variant", "boundary", "L", "omega", "params"},
                      {"phase"}, "bipartite_chain")
        params = doc["params"]
        if not isinstance(params, dict):
            raise ConfigError("params must be an object")
        variant = doc["variant"]
        if variant == "non_hermitian":
            allowed = {"r1", "r2", "v", "q1", "q2", "mu0"}
        elif variant in ("hermitian_counterpart", "temporal_only_deformed"):
            allowed = {"t1", "t2", "p", "mu0"}
        else:
            raise ConfigError(f"unknown variant {variant!r}")
        _require_keys(params, allowed, set(), f"params ({variant})")
        return BipartiteChainSpec(
            L=int(doc["L"]), boundary=doc["boundary"],
            drive=DriveSpec(omega=float(doc["omega"]), phase=float(doc.get("phase", 0.0))),
            variant=variant, **{key: float(params[key]) for key in allowed},
        )
    if kind == "step_quench":
        _require_keys(doc, {"model", "steps"}, {"params"}, "step_quench")
        params = doc.get("params", {})
        _require_keys(params, set(), {"gamma_z", "k"}, "step_quench params")
        steps = []
        for i, s in enumerate(doc["steps"]):
            _require_keys(s, {"duration", "J1", "J2", "b"}, set(), f"step {i}")
            if not (isinstance(s["b"], list) and len(s["b"]) == 2):
                raise ConfigError(f"step {i}: b must be a 2-vector")
            steps.append(QuenchStep(duration=float(s["duration"]),
                                    J1=_as_complex(s["J1"], "J1"),
                                    J2=_as_complex(s["J2"], "J2"),
                                    b=(float(s["b"][0]), float(s["b"][1]))))
        k = params.get("k", [0.0, 0.0])
        if not (isinstance(k, list) and len(k) == 2):
            raise ConfigError("params.k must be a 2-vector")
        return StepQuenchSpec(steps=tuple(steps),
                              gamma_z=_as_complex(params.get("gamma_z", 0.0), "gamma_z"),
                              k=(float(k[0]), float(k[1])))
    if kind == "stark_chain":
        _require_keys(doc, {"model", "N", "params"}, set(), "stark_chain")
        _require_keys(doc["params"], {"tL", "tR", "alpha"}, set(), "stark_chain params")
        return StarkChainSpec(N=int(doc["N"]), tL=float(doc["params"]["tL"]),
                              tR=float(doc["params"]["tR"]), alpha=float(doc["params"]["alpha"]))
    raise ConfigError(f"unknown model kind {kind!r}")


def load_model(path):
    """Read a model specification file (JSON)."""
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read model file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"model file {path} is not valid JSON: {exc}") from exc
    return model_from_dict(doc)
