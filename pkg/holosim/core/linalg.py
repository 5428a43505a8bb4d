"""
Small dense complex linear algebra and fidelity metrics

Matrices, state vectors and density matrices are plain numpy arrays. The ``as_*`` constructors
validate the invariants of each carrier and hand back read-only copies, so values can be shared
between worker threads.
"""
from typing import Dict, Optional

import logging
import numpy as np

from holosim.exceptions import InvalidInputError

logger = logging.getLogger(__name__)

ALLOWED_DIMS = (2, 3, 4)

UNITARY_TOL = 1e-12
HERMITIAN_TOL = 1e-10

# Basis order: |0> = |g>, |1> = |f>, |e>
KET_0 = np.array([1.0, 0.0, 0.0], dtype=complex)
KET_1 = np.array([0.0, 1.0, 0.0], dtype=complex)
KET_E = np.array([0.0, 0.0, 1.0], dtype=complex)
for _ket in (KET_0, KET_1, KET_E):
    _ket.setflags(write=False)

PAULI: Dict[str, np.ndarray] = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
PAULI_LABELS = ("I", "X", "Y", "Z")


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


def max_norm(a: np.ndarray) -> float:
    """Largest absolute entry"""
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    u = np.asarray(u)
    eye = np.eye(u.shape[-1])
    return max_norm(dagger(u) @ u - eye) < tol


def is_hermitian(h: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    h = np.asarray(h)
    return max_norm(h - dagger(h)) < tol


def as_square_matrix(a, unitary: bool = False, tol: float = UNITARY_TOL) -> np.ndarray:
    """
    Validate a ComplexSquareMatrix

    Args:
        a: array-like of shape (d, d) with d in {2, 3, 4}
        unitary: also require U†U = I within ``tol``
        tol: unitarity tolerance in max-norm

    Returns:
        Read-only complex array
    """
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in ALLOWED_DIMS:
        raise InvalidInputError(f"Expected a square matrix of dimension 2, 3 or 4, got shape {m.shape}")
    if unitary and not is_unitary(m, tol):
        raise InvalidInputError("Matrix flagged unitary violates U†U = I")
    return _frozen(m)


def as_state_vector(a, normalized: bool = True, tol: float = 1e-12) -> np.ndarray:
    v = np.asarray(a, dtype=complex)
    if v.ndim != 1 or v.shape[0] not in ALLOWED_DIMS:
        raise InvalidInputError(f"Expected a state vector of dimension 2, 3 or 4, got shape {v.shape}")
    if normalized and abs(np.linalg.norm(v) - 1.0) > tol:
        raise InvalidInputError(f"State vector norm {np.linalg.norm(v):.15f} is not 1")
    return _frozen(v)


def as_density_matrix(a) -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity of a density matrix"""
    rho = np.asarray(a, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] not in ALLOWED_DIMS:
        raise InvalidInputError(f"Expected a square density matrix, got shape {rho.shape}")
    if not is_hermitian(rho, 1e-12):
        raise InvalidInputError("Density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > 1e-10:
        raise InvalidInputError(f"Density matrix trace {np.trace(rho).real:.12f} is not 1")
    if np.min(np.linalg.eigvalsh(rho)) < -1e-9:
        raise InvalidInputError("Density matrix has negative eigenvalues")
    return _frozen(rho)


def projector(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def embed_qubit_state(rho2: np.ndarray) -> np.ndarray:
    """Place a 2x2 qubit density matrix in the leading block of a 3x3 one (no |e> occupancy)"""
    rho3 = np.zeros((3, 3), dtype=complex)
    rho3[:2, :2] = rho2
    return rho3


def hermitian_exponential(h: np.ndarray, s: float) -> np.ndarray:
    """
    exp(-i H s) through the eigendecomposition of the Hermitian generator

    Args:
        h: Hermitian matrix, or a stack of them with shape (..., d, d)
        s: Evolution time (scalar)

    Returns:
        Unitary matrix (or stack) of the same shape
    """
    h = np.asarray(h, dtype=complex)
    if h.ndim < 2 or h.shape[-1] != h.shape[-2]:
        raise InvalidInputError(f"Generator must be square, got shape {h.shape}")
    if not is_hermitian(h):
        raise InvalidInputError("Generator is not Hermitian within 1e-10")
    w, v = np.linalg.eigh(h)
    phases = np.exp(-1j * w * s)
    return (v * phases[..., None, :]) @ dagger(v)


def ordered_product(steps: np.ndarray) -> np.ndarray:
    """
    Time-ordered product of a stack of step propagators, U_{n-1} ... U_1 U_0

    Pairwise reduction keeps the rounding growth logarithmic in the number of steps.
    """
    stack = np.asarray(steps, dtype=complex)
    if stack.ndim != 3:
        raise InvalidInputError(f"Expected a stack of matrices, got shape {stack.shape}")
    if stack.shape[0] == 0:
        raise InvalidInputError("Empty propagator stack")
    while stack.shape[0] > 1:
        if stack.shape[0] % 2:
            stack = np.concatenate([stack, np.eye(stack.shape[-1], dtype=complex)[None]], axis=0)
        stack = stack[1::2] @ stack[0::2]
    return stack[0]


def average_gate_fidelity(u: np.ndarray, v: np.ndarray) -> float:
    """F_avg = (|Tr(U†V)|² + 2) / 6 for two single-qubit unitaries"""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != (2, 2) or v.shape != (2, 2):
        raise InvalidInputError("average_gate_fidelity expects two 2x2 matrices")
    if not (is_unitary(u, 1e-10) and is_unitary(v, 1e-10)):
        raise InvalidInputError("average_gate_fidelity expects unitary inputs")
    overlap = abs(np.trace(dagger(u) @ v)) ** 2
    return float(np.clip((overlap + 2.0) / 6.0, 0.0, 1.0))


def leaky_gate_fidelity(block: np.ndarray, v: np.ndarray) -> float:
    """Average gate fidelity of a possibly non-unitary projected block M against unitary V"""
    m = np.asarray(block, dtype=complex)
    v = np.asarray(v, dtype=complex)
    d = m.shape[0]
    value = (np.trace(dagger(m) @ m).real + abs(np.trace(dagger(v) @ m)) ** 2) / (d * (d + 1))
    return float(np.clip(value, 0.0, 1.0))


def global_phase_align(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """
    Return e^{iλ}U with λ maximizing Re Tr(V† e^{iλ} U)

    λ = 0 when Tr(V†U) vanishes.
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        raise InvalidInputError(f"Dimension mismatch: {u.shape} vs {v.shape}")
    overlap = np.trace(dagger(v) @ u)
    if abs(overlap) < 1e-300:
        return u.copy()
    return u * np.exp(-1j * np.angle(overlap))


def state_fidelity(rho: np.ndarray, psi: np.ndarray) -> float:
    """<ψ|ρ|ψ> for a density matrix and a pure state"""
    rho = np.asarray(rho, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    if rho.shape != (psi.shape[0], psi.shape[0]):
        raise InvalidInputError(f"Dimension mismatch: {rho.shape} vs {psi.shape}")
    return float(np.clip(np.real(psi.conj() @ rho @ psi), 0.0, 1.0))


def random_unitary(dim: int, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix"""
    rng = rng or np.random.default_rng()
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
