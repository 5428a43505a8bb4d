"""
Single-qubit state and process tomography on simulated channels
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import logging
import warnings
import numpy as np

from holosim.config import config
from holosim.control.schedule import ErrorModel, NO_ERROR, StaSchedule, TwoSegmentSchedule
from holosim.core.linalg import PAULI, PAULI_LABELS, embed_qubit_state, projector
from holosim.exceptions import InvalidInputError, ReconstructionWarning
from holosim.gates.holonomy import drive_spec_for, holonomy_matrix, named_gate
from holosim.hamiltonian.builder import HamiltonianKind
from holosim.propagation.evolve import apply_superoperator, evolve_lindblad
from holosim.propagation.noise import NoiseModel

logger = logging.getLogger(__name__)

NEGATIVITY_LIMIT = -0.05

_SQRT_HALF = 1.0 / np.sqrt(2.0)

# Nominal inputs: |0>, (|0>+i|1>)/√2, (|0>+|1>)/√2, |1>
EXACT_INPUTS: Dict[str, np.ndarray] = {
    "0": np.array([1.0, 0.0], dtype=complex),
    "+i": np.array([_SQRT_HALF, 1j * _SQRT_HALF], dtype=complex),
    "+": np.array([_SQRT_HALF, _SQRT_HALF], dtype=complex),
    "1": np.array([0.0, 1.0], dtype=complex),
}

# Preparation gates used for gate-based inputs, applied to |0>
PREPARATION_GATES = ("I", "Xhalf", "H", "X")


@dataclass(frozen=True)
class Channel:
    """
    Black-box qubit channel

    ``evaluator`` maps a 3x3 input density matrix (qubit block only) to the 3x3 output.
    ``preparer`` optionally returns (actual 3x3 input, nominal 2x2 input) for gate-based preparation.
    """
    label: str
    evaluator: Callable[[np.ndarray], np.ndarray]
    preparer: Optional[Callable[[str], Tuple[np.ndarray, np.ndarray]]] = None

    def __call__(self, rho3: np.ndarray) -> np.ndarray:
        return self.evaluator(rho3)


@dataclass(frozen=True)
class ChiMatrix:
    entries: np.ndarray
    basis: Tuple[str, ...] = PAULI_LABELS
    warnings: List[str] = field(default_factory=list)

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def min_eigenvalue(self) -> float:
        return float(np.min(np.linalg.eigvalsh(0.5 * (self.entries + self.entries.conj().T))))


def pauli_expectations(rho3: np.ndarray) -> Tuple[float, float, float, float]:
    """
    Pauli expectations of the projected (not renormalized) qubit block

    Returns:
        (x, y, z, leak) with leak the |e> population
    """
    rho3 = np.asarray(rho3, dtype=complex)
    block = rho3[:2, :2]
    x, y, z = (float(np.trace(block @ PAULI[p]).real) for p in ("X", "Y", "Z"))
    return x, y, z, float(rho3[2, 2].real)


def unitary_channel(u2: np.ndarray, label: str = "unitary") -> Channel:
    """Ideal channel ρ → UρU† on the qubit block"""
    u3 = np.eye(3, dtype=complex)
    u3[:2, :2] = u2

    def evaluate(rho3: np.ndarray) -> np.ndarray:
        return u3 @ rho3 @ u3.conj().T

    return Channel(label=label, evaluator=evaluate)


def mixture_channel(first: Channel, second: Channel, weight: float = 0.5) -> Channel:
    def evaluate(rho3: np.ndarray) -> np.ndarray:
        return weight * first(rho3) + (1.0 - weight) * second(rho3)

    return Channel(label=f"mix({first.label},{second.label})", evaluator=evaluate)


def simulated_channel(
    schedule: TwoSegmentSchedule,
    noise: NoiseModel,
    err: ErrorModel = NO_ERROR,
    n_steps: int = config.DEFAULT_N_STEPS,
    kind: HamiltonianKind = HamiltonianKind.STA,
    label: str = "simulated",
    preparation_schedules: Optional[Dict[str, Tuple[TwoSegmentSchedule, np.ndarray]]] = None,
) -> Channel:
    """
    Lindblad-backed channel of one schedule

    The gate superoperator is computed once and reused for every input. With
    ``preparation_schedules`` (name → (schedule, ideal 2x2 gate)) inputs can also be produced from
    |0> by simulated preparation gates under the same noise.
    """
    ground = embed_qubit_state(projector(EXACT_INPUTS["0"]))
    superop = evolve_lindblad(schedule, kind, err, noise, ground, n_steps).superoperator

    def evaluate(rho3: np.ndarray) -> np.ndarray:
        return apply_superoperator(superop, rho3)

    preparer = None
    if preparation_schedules:
        prepared = {}
        for name, (prep_schedule, ideal) in preparation_schedules.items():
            result = evolve_lindblad(prep_schedule, kind, NO_ERROR, noise, ground, n_steps)
            nominal = projector(ideal @ EXACT_INPUTS["0"])
            prepared[name] = (result.final_rho, nominal)

        def preparer(name: str) -> Tuple[np.ndarray, np.ndarray]:
            return prepared[name]

    return Channel(label=label, evaluator=evaluate, preparer=preparer)


def _inputs(channel: Channel, preparation: str) -> List[Tuple[np.ndarray, np.ndarray]]:
    """(actual 3x3 input, nominal 2x2 input) pairs"""
    if preparation == "exact":
        return [(embed_qubit_state(projector(psi)), projector(psi)) for psi in EXACT_INPUTS.values()]
    if preparation == "gates":
        if channel.preparer is None:
            raise InvalidInputError(f"Channel '{channel.label}' has no gate-based preparation")
        return [channel.preparer(name) for name in PREPARATION_GATES]
    raise InvalidInputError(f"Unknown preparation mode '{preparation}'")


def _pauli_basis_matrix() -> np.ndarray:
    # columns: row-major vec(Pᵀ), so that |P>> = (I ⊗ P)Σ_j|jj>
    return np.column_stack([PAULI[p].T.reshape(4) for p in PAULI_LABELS])


def process_chi(channel: Channel, preparation: str = "exact") -> ChiMatrix:
    """
    Linear-inversion process matrix in the Pauli basis

    The channel is evaluated on four informationally complete inputs, the action on the operator
    basis |j><k| is recovered by solving the 4x4 linear system of the nominal inputs, and the
    Choi matrix Σ |j><k| ⊗ E(|j><k|) is expanded in Pauli vectors.

    Args:
        channel: Channel to reconstruct
        preparation: "exact" (nominal input states) or "gates" (channel's own preparation)

    Returns:
        ChiMatrix with entries χ_mn, E(ρ) = Σ χ_mn P_m ρ P_n
    """
    pairs = _inputs(channel, preparation)
    with ThreadPoolExecutor(max_workers=min(len(pairs), config.MAX_WORKERS)) as pool:
        outputs = list(pool.map(lambda pair: channel(pair[0])[:2, :2], pairs))

    nominal = np.column_stack([pair[1].reshape(4) for pair in pairs])
    if abs(np.linalg.det(nominal)) < 1e-9:
        raise InvalidInputError("Tomography inputs are not informationally complete")
    # basis operator |j><k| = Σ_i coeffs[i] ρ_i
    coefficients = np.linalg.solve(nominal, np.eye(4, dtype=complex))
    outputs_stack = np.array(outputs)

    choi = np.zeros((4, 4), dtype=complex)
    for idx in range(4):
        j, k = divmod(idx, 2)
        image = np.tensordot(coefficients[:, idx], outputs_stack, axes=1)
        basis_op = np.zeros((2, 2), dtype=complex)
        basis_op[j, k] = 1.0
        choi += np.kron(basis_op, image)

    pauli_vectors = _pauli_basis_matrix()
    chi = 0.25 * pauli_vectors.conj().T @ choi @ pauli_vectors
    chi = 0.5 * (chi + chi.conj().T)

    result = ChiMatrix(entries=chi)
    min_eig = result.min_eigenvalue()
    if min_eig < NEGATIVITY_LIMIT:
        message = f"Non-physical chi matrix for '{channel.label}': min eigenvalue {min_eig:.3f}"
        warnings.warn(message, ReconstructionWarning)
        logger.warning(message)
        result.warnings.append(message)
    return result


def ideal_chi(u2: np.ndarray) -> np.ndarray:
    """χ of the unitary channel: χ_mn = c_m c_n*, U = Σ c_m P_m"""
    coeffs = np.array([0.5 * np.trace(PAULI[p].conj().T @ u2) for p in PAULI_LABELS])
    return np.outer(coeffs, coeffs.conj())


def process_fidelity(chi: ChiMatrix, ideal_gate: np.ndarray) -> float:
    """Tr(χ_ideal χ), invariant under the global phase of ideal_gate"""
    value = np.trace(ideal_chi(np.asarray(ideal_gate, dtype=complex)) @ chi.entries).real
    return float(np.clip(value, 0.0, 1.0))


def gate_preparations(omega_a: float, duration_T: float) -> Dict[str, Tuple[TwoSegmentSchedule, np.ndarray]]:
    """STA schedules of the preparation gates with their ideal 2x2 images"""
    preparations = {}
    for name in PREPARATION_GATES:
        target = named_gate(name)
        schedule = StaSchedule.for_gate(drive_spec_for(target), omega_a, duration_T)
        preparations[name] = (schedule, holonomy_matrix(target))
    return preparations
