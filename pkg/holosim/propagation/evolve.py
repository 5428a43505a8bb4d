"""
Time-ordered propagation of states and density matrices

Unitary runs use the midpoint exponential rule: one exact exp(-i H(t_mid) dt) per step and a
time-ordered product. Lindblad runs wrap each coherent step in half-step dissipator exponentials
(symmetric splitting); both factors are exact CPTP maps, so trace and positivity hold at any dt.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import logging
import math
import numpy as np
from pydantic import BaseModel
from scipy.linalg import expm

from holosim.config import config
from holosim.control.schedule import ErrorModel, NO_ERROR, TwoSegmentSchedule
from holosim.core.linalg import (
    as_density_matrix,
    hermitian_exponential,
    is_unitary,
    max_norm,
    ordered_product,
    projector,
)
from holosim.exceptions import InvalidInputError
from holosim.hamiltonian.builder import HamiltonianKind, hamiltonian_stack
from holosim.propagation.noise import NoiseModel, collapse_operators, dissipator_superoperator

logger = logging.getLogger(__name__)

MIN_STEPS = 100
EXACT_TOL = 1e-10
MIN_ORDER = 1.8


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    rho: np.ndarray


@dataclass(frozen=True)
class PropagationResult:
    steps_used: int
    final_unitary: Optional[np.ndarray] = None
    final_rho: Optional[np.ndarray] = None
    superoperator: Optional[np.ndarray] = None
    trajectory: List[TrajectoryPoint] = field(default_factory=list)


class ConvergenceReport(BaseModel):
    """Step-halving convergence summary of the unitary integrator"""
    n_steps: int
    error: float
    error_refined: float
    order: Optional[float]
    status: str
    passed: bool


def _even_steps(n_steps: int, minimum: int = MIN_STEPS) -> int:
    if n_steps < minimum:
        raise InvalidInputError(f"n_steps must be >= {minimum}, got {n_steps}")
    if n_steps % 2:
        logger.warning(f"n_steps={n_steps} is odd; using {n_steps + 1} so T/2 falls on a step boundary")
        return n_steps + 1
    return n_steps


def step_propagators(schedule: TwoSegmentSchedule, kind: HamiltonianKind, err: ErrorModel,
                     n_steps: int) -> Tuple[np.ndarray, float]:
    """Per-step midpoint exponentials, shape (n, 3, 3), and the step size"""
    if not isinstance(schedule, TwoSegmentSchedule):
        raise InvalidInputError(f"Unsupported schedule type {type(schedule).__name__}")
    dt = schedule.duration_T / n_steps
    midpoints = (np.arange(n_steps) + 0.5) * dt
    table = schedule.drive_table(midpoints, err)
    hamiltonians = hamiltonian_stack(kind, schedule.gate, table)
    return hermitian_exponential(hamiltonians, dt), dt


def _record_indices(n_steps: int, record_every: Optional[int]) -> set:
    if not record_every:
        return set()
    if record_every < 1:
        raise InvalidInputError("record_every must be a positive step count")
    marks = set(range(record_every, n_steps + 1, record_every))
    marks.add(n_steps)
    return marks


def evolve_unitary(
    schedule: TwoSegmentSchedule,
    kind: HamiltonianKind = HamiltonianKind.STA,
    err: ErrorModel = NO_ERROR,
    n_steps: int = config.DEFAULT_N_STEPS,
    initial_state: Optional[np.ndarray] = None,
    record_every: Optional[int] = None,
) -> PropagationResult:
    """
    Propagate the schedule coherently

    Args:
        schedule: Any two-segment schedule
        kind: Bare (H₀) or Sta (H₀ + H_a)
        err: Control-error model
        n_steps: Number of midpoint steps (bumped to even)
        initial_state: Optional state vector for the trajectory
        record_every: Record the state every this many steps (requires initial_state)

    Returns:
        PropagationResult with the final 3x3 unitary
    """
    n = _even_steps(n_steps)
    steps, dt = step_propagators(schedule, kind, err, n)
    unitary = ordered_product(steps)
    if not is_unitary(unitary, 1e-9):
        logger.warning(f"Propagator drifted from unitarity by {max_norm(unitary.conj().T @ unitary - np.eye(3)):.2e}")

    trajectory = []
    marks = _record_indices(n, record_every)
    if marks and initial_state is not None:
        psi = np.asarray(initial_state, dtype=complex)
        trajectory.append(TrajectoryPoint(0.0, projector(psi)))
        for k in range(n):
            psi = steps[k] @ psi
            if k + 1 in marks:
                trajectory.append(TrajectoryPoint((k + 1) * dt, projector(psi)))
    return PropagationResult(steps_used=n, final_unitary=unitary, trajectory=trajectory)


def _symmetrize(rho: np.ndarray) -> np.ndarray:
    return 0.5 * (rho + rho.conj().T)


def evolve_lindblad(
    schedule: TwoSegmentSchedule,
    kind: HamiltonianKind,
    err: ErrorModel,
    noise: NoiseModel,
    rho0: np.ndarray,
    n_steps: int = config.DEFAULT_N_STEPS,
    record_every: Optional[int] = None,
) -> PropagationResult:
    """
    Integrate the Lindblad master equation with symmetric operator splitting

    Without a trajectory request the whole gate is assembled as one 9x9 superoperator (returned on
    the result so further inputs can reuse it); with one, ρ is stepped and symmetrized every step.
    """
    rho0 = as_density_matrix(rho0)
    if rho0.shape != (3, 3):
        raise InvalidInputError("evolve_lindblad expects a 3x3 density matrix")
    n = _even_steps(n_steps)
    steps, dt = step_propagators(schedule, kind, err, n)
    dissipator = dissipator_superoperator(collapse_operators(noise))
    half_step = expm(0.5 * dt * dissipator)

    marks = _record_indices(n, record_every)
    if marks:
        trajectory = [TrajectoryPoint(0.0, np.array(rho0))]
        vec = np.array(rho0).reshape(9)
        for k in range(n):
            vec = half_step @ vec
            rho = vec.reshape(3, 3)
            rho = steps[k] @ rho @ steps[k].conj().T
            vec = half_step @ rho.reshape(9)
            rho = _symmetrize(vec.reshape(3, 3))
            vec = rho.reshape(9)
            if k + 1 in marks:
                trajectory.append(TrajectoryPoint((k + 1) * dt, rho))
        final_rho, superop = rho, None
    else:
        # (U ⊗ U*) acting on row-major vec(ρ)
        coherent = np.einsum("nij,nkl->nikjl", steps, steps.conj()).reshape(n, 9, 9)
        superop = ordered_product(half_step[None] @ coherent @ half_step[None])
        final_rho = _symmetrize((superop @ np.array(rho0).reshape(9)).reshape(3, 3))
        trajectory = []

    drift = abs(np.trace(final_rho) - 1.0)
    if drift > 1e-8:
        logger.warning(f"Trace drift {drift:.2e} after Lindblad propagation")
    return PropagationResult(steps_used=n, final_rho=final_rho, superoperator=superop,
                             trajectory=trajectory)


def apply_superoperator(superop: np.ndarray, rho: np.ndarray) -> np.ndarray:
    dim = rho.shape[0]
    return _symmetrize((superop @ np.asarray(rho, dtype=complex).reshape(dim * dim)).reshape(dim, dim))


def convergence_check(
    schedule: TwoSegmentSchedule,
    kind: HamiltonianKind = HamiltonianKind.STA,
    err: ErrorModel = NO_ERROR,
    n_steps: int = 200,
) -> ConvergenceReport:
    """
    Empirical order of the unitary integrator from runs at n, 2n and 4n steps
    """
    n = _even_steps(n_steps, minimum=2 * MIN_STEPS)
    u_n, u_2n, u_4n = (evolve_unitary(schedule, kind, err, m).final_unitary for m in (n, 2 * n, 4 * n))
    error = max_norm(u_n - u_2n)
    refined = max_norm(u_2n - u_4n)
    if refined < EXACT_TOL:
        return ConvergenceReport(n_steps=n, error=error, error_refined=refined, order=None,
                                 status="Exact", passed=True)
    order = math.log2(error / refined)
    passed = order >= MIN_ORDER
    logger.info(f"Convergence at n={n}: error={error:.3e}, order={order:.2f}")
    return ConvergenceReport(n_steps=n, error=error, error_refined=refined, order=order,
                             status="Converged" if passed else "Failed", passed=passed)
