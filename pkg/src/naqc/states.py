"""Generators and seeded samplers for the state families used in experiments."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import qlin

GHZ_CLASS_TANGLE_FLOOR = 1e-6
MAX_REJECTION_ATTEMPTS = 10_000

FAMILIES = ("bell-mixture", "werner", "canonical", "haar-pure",
            "ghz-class", "w-class", "separable", "biseparable")


def phi_plus() -> np.ndarray:
    """The Bell state (|00> + |11>)/sqrt(2)."""
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 1.0 / np.sqrt(2.0)
    return v


def psi_plus() -> np.ndarray:
    """The Bell state (|01> + |10>)/sqrt(2)."""
    v = np.zeros(4, dtype=complex)
    v[1] = v[2] = 1.0 / np.sqrt(2.0)
    return v


def bell_mixture(p: float) -> np.ndarray:
    """Mixture p |phi+><phi+| + (1-p) |psi+><psi+| of two Bell states."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixing parameter must be in [0, 1], got {p}")
    return (p * qlin.pure_to_density(phi_plus())
            + (1.0 - p) * qlin.pure_to_density(psi_plus()))


def werner(p: float) -> np.ndarray:
    """Werner state: p |phi+><phi+| + (1-p)/4 * identity."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixing parameter must be in [0, 1], got {p}")
    return p * qlin.pure_to_density(phi_plus()) + (1.0 - p) / 4.0 * np.eye(4)


@dataclass(frozen=True)
class CanonicalThreeQubitParams:
    """Five amplitudes and one phase of the canonical three-qubit pure form."""

    lambda0: float
    lambda1: float
    lambda2: float
    lambda3: float
    lambda4: float
    beta: float = 0.0

    def __post_init__(self):
        lams = (self.lambda0, self.lambda1, self.lambda2,
                self.lambda3, self.lambda4)
        if any(l < 0 for l in lams):
            raise ValueError("canonical amplitudes must be nonnegative")
        norm2 = sum(l * l for l in lams)
        if abs(norm2 - 1.0) > 1e-12:
            raise ValueError(f"canonical amplitudes must satisfy "
                             f"sum lambda_i^2 = 1, got {norm2!r}")
        if not 0.0 <= self.beta <= np.pi:
            raise ValueError(f"beta must lie in [0, pi], got {self.beta}")


def canonical_three_qubit(params: CanonicalThreeQubitParams) -> np.ndarray:
    """Three-qubit pure state with support on |000>, |100>, |101>, |110>, |111>."""
    psi = np.zeros(8, dtype=complex)
    psi[0b000] = params.lambda0
    psi[0b100] = params.lambda1 * np.exp(1j * params.beta)
    psi[0b101] = params.lambda2
    psi[0b110] = params.lambda3
    psi[0b111] = params.lambda4
    return psi


def three_tangle(psi: np.ndarray) -> float:
    """Genuine tripartite entanglement: 4 |hyperdeterminant| of the amplitudes.

    Vanishes on product and W-class states; equals 1 on the GHZ state.
    """
    a = qlin.validate_pure_state(psi)
    if a.shape[0] != 8:
        raise ValueError("three_tangle needs an 8-dimensional pure state")
    d1 = (a[0] ** 2 * a[7] ** 2 + a[1] ** 2 * a[6] ** 2
          + a[2] ** 2 * a[5] ** 2 + a[4] ** 2 * a[3] ** 2)
    d2 = (a[0] * a[7] * a[3] * a[4] + a[0] * a[7] * a[5] * a[2]
          + a[0] * a[7] * a[6] * a[1] + a[3] * a[4] * a[5] * a[2]
          + a[3] * a[4] * a[6] * a[1] + a[5] * a[2] * a[6] * a[1])
    d3 = a[0] * a[6] * a[5] * a[3] + a[7] * a[1] * a[2] * a[4]
    tau = 4.0 * abs(d1 - 2.0 * d2 + 4.0 * d3)
    return min(tau, 1.0)


def haar_pure(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random pure state: first column of a Haar unitary."""
    return qlin.haar_unitary(dim, rng)[:, 0]


def random_density(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Full-rank random density matrix from the Ginibre ensemble."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


@dataclass(frozen=True)
class FamilySpec:
    """One named state family plus its parameters and sampling seed."""

    family: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; "
                             f"expected one of {FAMILIES}")


def _sample_w_class(rng: np.random.Generator) -> np.ndarray:
    # uniform on the positive orthant of the unit 3-sphere
    lam = np.abs(rng.standard_normal(4))
    lam /= np.linalg.norm(lam)
    return canonical_three_qubit(CanonicalThreeQubitParams(
        lam[0], lam[1], lam[2], lam[3], 0.0, 0.0))


def _sample_ghz_class(rng: np.random.Generator) -> np.ndarray:
    for _ in range(MAX_REJECTION_ATTEMPTS):
        psi = haar_pure(8, rng)
        if three_tangle(psi) > GHZ_CLASS_TANGLE_FLOOR:
            return psi
    raise RuntimeError("rejection sampling failed to find a state with "
                       f"three-tangle > {GHZ_CLASS_TANGLE_FLOOR} after "
                       f"{MAX_REJECTION_ATTEMPTS} attempts")


def _sample_separable(rng: np.random.Generator) -> np.ndarray:
    k = int(rng.integers(1, 5))
    weights = rng.dirichlet(np.ones(k))
    rho = np.zeros((4, 4), dtype=complex)
    for w in weights:
        a = haar_pure(2, rng)
        b = haar_pure(2, rng)
        rho += w * qlin.pure_to_density(np.kron(a, b))
    return rho


def sample(spec: FamilySpec, rng: np.random.Generator | None = None):
    """Draw one state from ``spec``; deterministic given the seed/stream.

    Returns a pure-state vector for the pure families and a density
    matrix for ``bell-mixture``, ``werner`` and ``separable``.
    """
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    fam = spec.family
    if fam == "bell-mixture":
        return bell_mixture(float(spec.params["p"]))
    if fam == "werner":
        return werner(float(spec.params["p"]))
    if fam == "canonical":
        p = spec.params
        return canonical_three_qubit(CanonicalThreeQubitParams(
            float(p["lambda0"]), float(p["lambda1"]), float(p["lambda2"]),
            float(p["lambda3"]), float(p["lambda4"]),
            float(p.get("beta", 0.0))))
    if fam == "haar-pure":
        return haar_pure(int(spec.params.get("dim", 8)), rng)
    if fam == "ghz-class":
        return _sample_ghz_class(rng)
    if fam == "w-class":
        return _sample_w_class(rng)
    if fam == "separable":
        return _sample_separable(rng)
    if fam == "biseparable":
        return np.kron(haar_pure(4, rng), haar_pure(2, rng))
    raise ValueError(f"unknown family {fam!r}")


def substream(seed: int, index: int) -> np.random.Generator:
    """Independent random stream for work item ``index`` of a seeded run."""
    return np.random.default_rng([seed, index])
