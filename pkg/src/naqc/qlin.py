"""Dense complex linear algebra for one-, two-, and three-qubit states.

All operations are pure functions on numpy arrays.  States are plain
``ndarray`` objects; validity is enforced by the ``validate_*`` helpers
rather than by wrapper classes, so everything composes with ordinary
numpy code.  Subsystems are ordered A, B, C with A the most significant
bit of the computational-basis index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITICITY_ATOL = 1e-12
TRACE_ATOL = 1e-12
EIGENVALUE_FLOOR = -1e-10
UNITARITY_ATOL = 1e-12

VALID_DIMS = (2, 4, 8)

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)
IDENTITY_2 = np.eye(2, dtype=complex)


def validate_pure_state(psi: np.ndarray, name: str = "psi") -> np.ndarray:
    """Check that ``psi`` is a finite unit vector of dimension 2, 4 or 8."""
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1 or psi.shape[0] not in VALID_DIMS:
        raise ValueError(f"{name} must be a vector of dimension 2, 4 or 8, "
                         f"got shape {psi.shape}")
    if not (np.all(np.isfinite(psi.real)) and np.all(np.isfinite(psi.imag))):
        raise ValueError(f"{name} has non-finite amplitudes")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"{name} is not normalized: |psi| = {norm!r}")
    return psi


def validate_density_matrix(rho: np.ndarray, name: str = "rho") -> np.ndarray:
    """Check Hermiticity, unit trace and positivity of a density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] not in VALID_DIMS:
        raise ValueError(f"{name} must be square of dimension 2, 4 or 8, "
                         f"got shape {rho.shape}")
    if not (np.all(np.isfinite(rho.real)) and np.all(np.isfinite(rho.imag))):
        raise ValueError(f"{name} has non-finite entries")
    herm = np.abs(rho - rho.conj().T).max()
    if herm > HERMITICITY_ATOL:
        raise ValueError(f"{name} is not Hermitian: max |rho - rho^dag| = {herm:.3e}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_ATOL:
        raise ValueError(f"{name} does not have unit trace: tr = {tr!r}")
    lo = np.linalg.eigvalsh(rho).min()
    if lo < EIGENVALUE_FLOOR:
        raise ValueError(f"{name} is not positive semidefinite: "
                         f"min eigenvalue = {lo:.3e}")
    return rho


def validate_unitary(u: np.ndarray, name: str = "U") -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"{name} must be square, got shape {u.shape}")
    dev = np.abs(u.conj().T @ u - np.eye(u.shape[0])).max()
    if dev > UNITARITY_ATOL:
        raise ValueError(f"{name} is not unitary: max |U^dag U - I| = {dev:.3e}")
    return u


def pure_to_density(psi: np.ndarray) -> np.ndarray:
    """Projector |psi><psi| of a pure state vector."""
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product of two states (vectors or matrices) in A(x)B order."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != b.ndim:
        raise ValueError("kron arguments must both be vectors or both matrices")
    if a.shape[0] * b.shape[0] > 8:
        raise ValueError(f"kron result dimension {a.shape[0] * b.shape[0]} "
                         "exceeds the supported maximum of 8")
    return np.kron(a, b)


def _n_qubits(dim: int) -> int:
    n = int(round(np.log2(dim)))
    if 2 ** n != dim:
        raise ValueError(f"dimension {dim} is not a power of 2")
    return n


def partial_trace(rho: np.ndarray, keep) -> np.ndarray:
    """Reduced state over the subsystems listed in ``keep`` (0-based, A=0).

    The kept subsystems retain their original relative order.
    """
    rho = np.asarray(rho, dtype=complex)
    n = _n_qubits(rho.shape[0])
    keep = tuple(sorted(set(int(k) for k in keep)))
    if not keep or any(k < 0 or k >= n for k in keep):
        raise ValueError(f"invalid subsystem set {keep} for {n} qubits")
    traced = [q for q in range(n) if q not in keep]
    t = rho.reshape((2,) * (2 * n))
    m = n
    for q in sorted(traced, reverse=True):
        t = np.trace(t, axis1=q, axis2=q + m)
        m -= 1
    d = 2 ** len(keep)
    return t.reshape(d, d)


def bloch_vector(rho: np.ndarray) -> np.ndarray:
    """Bloch vector (x, y, z) of a single-qubit density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"bloch_vector needs a 2x2 matrix, got {rho.shape}")
    return np.array([
        2.0 * rho[0, 1].real,
        -2.0 * rho[0, 1].imag,
        (rho[0, 0] - rho[1, 1]).real,
    ])


def bloch_rotation(u: np.ndarray) -> np.ndarray:
    """SO(3) rotation acting on Bloch vectors under conjugation by ``u``."""
    u = validate_unitary(u)
    if u.shape != (2, 2):
        raise ValueError("bloch_rotation needs a 2x2 unitary")
    r = np.empty((3, 3))
    for j, sj in enumerate(PAULIS):
        m = u @ sj @ u.conj().T
        for i, si in enumerate(PAULIS):
            r[i, j] = 0.5 * np.trace(si @ m).real
    return r


@dataclass(frozen=True)
class CorrDecomp:
    """Pauli decomposition of a two-qubit state.

    ``r_a`` and ``r_b`` are the local Bloch vectors, ``tmat`` the 3x3
    correlation matrix T_ij = tr[rho (sigma_i x sigma_j)].
    """

    r_a: np.ndarray
    r_b: np.ndarray
    tmat: np.ndarray

    def swapped(self) -> "CorrDecomp":
        """Decomposition of the state with the two parties exchanged."""
        return CorrDecomp(self.r_b.copy(), self.r_a.copy(), self.tmat.T.copy())


def to_corr(rho: np.ndarray) -> CorrDecomp:
    """Bloch/correlation decomposition of a two-qubit density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"to_corr needs a 4x4 matrix, got {rho.shape}")
    r_a = np.array([np.trace(rho @ np.kron(s, IDENTITY_2)).real for s in PAULIS])
    r_b = np.array([np.trace(rho @ np.kron(IDENTITY_2, s)).real for s in PAULIS])
    tmat = np.array([[np.trace(rho @ np.kron(si, sj)).real for sj in PAULIS]
                     for si in PAULIS])
    return CorrDecomp(r_a, r_b, tmat)


def from_corr(corr: CorrDecomp) -> np.ndarray:
    """Reassemble the two-qubit density matrix from its decomposition."""
    rho = np.eye(4, dtype=complex)
    for i, s in enumerate(PAULIS):
        rho += corr.r_a[i] * np.kron(s, IDENTITY_2)
        rho += corr.r_b[i] * np.kron(IDENTITY_2, s)
    for i, si in enumerate(PAULIS):
        for j, sj in enumerate(PAULIS):
            rho += corr.tmat[i, j] * np.kron(si, sj)
    return rho / 4.0


def apply_local_unitary(rho: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Conjugate a two-qubit state by the product unitary u (x) v."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("apply_local_unitary needs a 4x4 state")
    u = validate_unitary(u, "u")
    v = validate_unitary(v, "v")
    w = np.kron(u, v)
    return w @ rho @ w.conj().T


def partial_transpose(rho: np.ndarray) -> np.ndarray:
    """Transpose the second factor of a two-qubit state (PPT test input)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("partial_transpose needs a 4x4 state")
    t = rho.reshape(2, 2, 2, 2)
    return t.transpose(0, 3, 2, 1).reshape(4, 4)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a Ginibre matrix with phase fix."""
    if dim not in VALID_DIMS:
        raise ValueError(f"dim must be one of {VALID_DIMS}, got {dim}")
    z = (rng.standard_normal((dim, dim))
         + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))
