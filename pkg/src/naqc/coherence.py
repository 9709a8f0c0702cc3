"""l1-norm coherence of a qubit in arbitrary bases and MUB triads.

A measurement basis is represented either explicitly (2x2 matrix with the
basis kets as columns) or by its Bloch axis; the coherence of a state in a
basis depends only on the axis, not on the outcome labelling.  Triads of
mutually unbiased bases are parameterized by ``BasisTriad``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import qlin

#: Ceiling on the sum of a qubit's coherences over any MUB triad.
COMPLEMENTARITY_BOUND = math.sqrt(6.0)

MUB_FAMILIES = ("two-angle", "full")


@dataclass(frozen=True)
class MeasurementAxis:
    """Unit Bloch axis given by polar angle ``theta`` and azimuth ``phi``."""

    theta: float
    phi: float

    @property
    def unit(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi),
                         st * math.sin(self.phi),
                         math.cos(self.theta)])

    @classmethod
    def from_vector(cls, v) -> "MeasurementAxis":
        v = np.asarray(v, dtype=float)
        n = np.linalg.norm(v)
        if n < 1e-14:
            raise ValueError("cannot build an axis from the zero vector")
        v = v / n
        # atan2 form stays well conditioned at the poles, unlike acos(z)
        return cls(math.atan2(math.hypot(v[0], v[1]), v[2]),
                   math.atan2(v[1], v[0]) % (2.0 * math.pi))


def axis_unit(axis) -> np.ndarray:
    """Coerce a MeasurementAxis or length-3 vector to a unit Bloch vector."""
    if isinstance(axis, MeasurementAxis):
        return axis.unit
    v = np.asarray(axis, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"axis must be a MeasurementAxis or 3-vector, got {v.shape}")
    n = np.linalg.norm(v)
    if abs(n - 1.0) > 1e-10:
        raise ValueError(f"axis vector must have unit norm, got |v| = {n!r}")
    return v


class CoherenceTriple(NamedTuple):
    """Coherences of one state in the three bases of a triad."""

    c1: float
    c2: float
    c3: float


@dataclass(frozen=True)
class BasisTriad:
    """Triad of pairwise mutually unbiased single-qubit bases.

    The first basis points along the (theta, phi) axis; the other two lie
    in its equatorial plane.  Family ``two-angle`` fixes their in-plane
    orientation (``chi`` is ignored); family ``full`` rotates them about
    the first axis by ``chi``, covering every qubit MUB triad.
    """

    theta: float
    phi: float
    chi: float = 0.0
    family: str = "full"

    def __post_init__(self):
        if self.family not in MUB_FAMILIES:
            raise ValueError(f"family must be one of {MUB_FAMILIES}, "
                             f"got {self.family!r}")

    def axes(self) -> np.ndarray:
        """Bloch axes of the three bases, one per row (orthonormal)."""
        st, ct = math.sin(self.theta), math.cos(self.theta)
        sp, cp = math.sin(self.phi), math.cos(self.phi)
        n1 = np.array([st * cp, st * sp, ct])
        e1 = np.array([-ct * cp, -ct * sp, st])
        e2 = np.array([sp, -cp, 0.0])
        if self.family == "two-angle":
            return np.array([n1, e1, e2])
        cx, sx = math.cos(self.chi), math.sin(self.chi)
        return np.array([n1, cx * e1 + sx * e2, -sx * e1 + cx * e2])

    def bases(self) -> list[np.ndarray]:
        """Explicit 2x2 basis matrices (kets as columns) of the triad."""
        c, s = math.cos(self.theta / 2.0), math.sin(self.theta / 2.0)
        ep = complex(math.cos(self.phi), math.sin(self.phi))
        m1 = np.array([[c, s], [ep * s, -ep * c]], dtype=complex)
        isq = 1.0 / math.sqrt(2.0)
        m2 = np.array([m1[:, 0] + m1[:, 1], m1[:, 0] - m1[:, 1]]).T * isq
        m3 = np.array([m1[:, 0] + 1j * m1[:, 1], m1[:, 0] - 1j * m1[:, 1]]).T * isq
        if self.family == "full":
            n1 = self.axes()[0]
            h = n1[0] * qlin.SIGMA_X + n1[1] * qlin.SIGMA_Y + n1[2] * qlin.SIGMA_Z
            u = (math.cos(self.chi / 2.0) * np.eye(2)
                 - 1j * math.sin(self.chi / 2.0) * h)
            m2, m3 = u @ m2, u @ m3
        return [m1, m2, m3]


def l1_coherence(rho: np.ndarray, basis: np.ndarray) -> float:
    """Sum of absolute off-diagonal elements of ``rho`` in ``basis``.

    For a qubit this is twice the magnitude of the single off-diagonal
    element, ``2 |<b0| rho |b1>|``.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError("l1_coherence needs a single-qubit state")
    basis = np.asarray(basis, dtype=complex)
    if basis.shape != (2, 2):
        raise ValueError("basis must be a 2x2 matrix with kets as columns")
    dev = np.abs(basis.conj().T @ basis - np.eye(2)).max()
    if dev > 1e-12:
        raise ValueError(f"basis is not orthonormal: deviation {dev:.3e}")
    return 2.0 * abs(basis[:, 0].conj() @ rho @ basis[:, 1])


def bloch_coherence(r, axis) -> float:
    """Coherence from geometry: component of ``r`` orthogonal to the axis."""
    r = np.asarray(r, dtype=float)
    n = axis_unit(axis)
    q = float(r @ r) - float(n @ r) ** 2
    return math.sqrt(q) if q > 0.0 else 0.0


def triad_coherences(rho: np.ndarray, theta: float, phi: float) -> CoherenceTriple:
    """Closed-form coherences in the two-angle triad at (theta, phi).

    Equals ``l1_coherence`` against the explicitly constructed bases of
    ``BasisTriad(theta, phi, family="two-angle")``.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError("triad_coherences needs a single-qubit state")
    r00, r01 = rho[0, 0], rho[0, 1]
    r10, r11 = rho[1, 0], rho[1, 1]
    st, ct = math.sin(theta), math.cos(theta)
    c2, s2 = math.cos(theta / 2.0) ** 2, math.sin(theta / 2.0) ** 2
    ep = complex(math.cos(phi), math.sin(phi))
    em = ep.conjugate()
    c_1 = 2.0 * abs(0.5 * st * (r00 - r11) - ep * c2 * r01 + em * s2 * r10)
    c_2 = abs(ct * (r00 - r11) + ep * (1.0 + st) * r01 - em * (1.0 - st) * r10)
    c_3 = abs(r00 - r11 + 1j * ep * r01 + 1j * em * r10)
    return CoherenceTriple(float(c_1), float(c_2), float(c_3))


def triad_coherence_sum(rho: np.ndarray, triad: BasisTriad) -> float:
    """Sum of the three coherences of ``rho`` over the triad's bases."""
    r = qlin.bloch_vector(rho)
    return float(sum(bloch_coherence(r, ax) for ax in triad.axes()))


def max_coherence_sum(rho: np.ndarray) -> float:
    """Largest coherence sum over all MUB triads: sqrt(6) |r|.

    The optimum spreads the Bloch vector equally over the three axes,
    which is attainable for every state.
    """
    r = qlin.bloch_vector(rho)
    return COMPLEMENTARITY_BOUND * float(np.linalg.norm(r))
