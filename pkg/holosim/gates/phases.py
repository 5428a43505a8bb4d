"""
Numeric geometric and dynamical phases along the followed eigenstate
"""
from dataclasses import dataclass, replace
from typing import List, Optional

import logging
import math
import numpy as np
from pydantic import BaseModel
from scipy.integrate import trapezoid

from holosim.config import config
from holosim.control.schedule import NO_ERROR, Segment, StaSchedule
from holosim.exceptions import BranchLostError, InvalidInputError
from holosim.hamiltonian.builder import EigenFrame, HamiltonianKind, bright_dark_pair, eigensystem_at
from holosim.propagation.evolve import evolve_unitary

logger = logging.getLogger(__name__)

MIN_PHASE_STEPS = 1000
MIN_OVERLAP = 0.9
# largest φ₁ increment between interpolated frames at the mid-gate phase switch
MAX_FRAME_PHASE_STEP = math.pi / 8


class PhaseReport(BaseModel):
    """Phases acquired by the bright state, as factors e^{i·value}"""
    geometric: float
    dynamical: float
    total: float


@dataclass(frozen=True)
class BranchTrack:
    """Followed eigenstate sampled on both halves, plus the frames bridging the φ₁ switch"""
    states: List[np.ndarray]
    tau: np.ndarray
    eigenvalues_first: np.ndarray
    eigenvalues_second: np.ndarray


def _wrap(angle: float) -> float:
    return math.atan2(math.sin(angle), math.cos(angle))


def _pick_branch(previous: np.ndarray, frame: EigenFrame, step: int):
    if frame.degenerate:
        return previous, None
    candidates = ((frame.e_minus, frame.eigenvalue_minus), (frame.e_plus, frame.eigenvalue_plus))
    overlaps = [np.vdot(previous, state) for state, _ in candidates]
    best = int(np.argmax(np.abs(overlaps)))
    if abs(overlaps[best]) < MIN_OVERLAP:
        raise BranchLostError(step, float(abs(overlaps[best])))
    state, value = candidates[best]
    # keep the real gauge sign continuous along the branch
    if overlaps[best].real < 0:
        state = -state
    return state, value


def track_branch(schedule: StaSchedule, n_steps: int = config.DEFAULT_N_STEPS) -> BranchTrack:
    """
    Follow the eigenstate of H₀ that starts on |b>

    Each half is sampled on its own closed grid τ ∈ [0, T/2]. Between the halves the |e> frame phase
    is swept from γ₁ to γ₂ in increments of at most π/8, which lifts the mid-gate phase switch
    without branch ambiguity.
    """
    if n_steps < MIN_PHASE_STEPS:
        raise InvalidInputError(f"n_steps must be >= {MIN_PHASE_STEPS}, got {n_steps}")
    half_steps = (n_steps + 1) // 2
    tau = np.linspace(0.0, schedule.half, half_steps + 1)
    first = schedule.segment_table(Segment.FIRST_HALF, tau, NO_ERROR)
    second = schedule.segment_table(Segment.SECOND_HALF, tau, NO_ERROR)

    bright, _ = bright_dark_pair(schedule.gate)
    current = bright
    states = [current]
    values_first, values_second = [], []
    step = 0
    for i in range(len(tau)):
        current, value = _pick_branch(current, eigensystem_at(schedule.gate, first.sample(i)), step)
        states.append(current)
        values_first.append(value if value is not None else values_first[-1])
        step += 1

    boundary = first.sample(len(tau) - 1)
    jump = schedule.gamma2 - schedule.gamma1
    n_bridge = int(math.ceil(abs(jump) / MAX_FRAME_PHASE_STEP))
    for j in range(1, n_bridge + 1):
        frame = eigensystem_at(schedule.gate, replace(boundary, phi1=schedule.gamma1 + jump * j / n_bridge))
        current, _ = _pick_branch(current, frame, step)
        states.append(current)
        step += 1

    for i in range(len(tau)):
        current, value = _pick_branch(current, eigensystem_at(schedule.gate, second.sample(i)), step)
        states.append(current)
        values_second.append(value if value is not None else values_second[-1])
        step += 1

    return BranchTrack(
        states=states,
        tau=tau,
        eigenvalues_first=np.array(values_first),
        eigenvalues_second=np.array(values_second),
    )


def geometric_phase_numeric(schedule: StaSchedule, n_steps: int = config.DEFAULT_N_STEPS) -> float:
    """
    Discrete loop phase -Im Σ ln<Ē_k|Ē_{k+1}> of the followed branch, closed back onto |b>

    Returns -(γ₁ - γ₂) for the two-segment STA schedules.
    """
    track = track_branch(schedule, n_steps)
    loop = track.states + [track.states[0]]
    total = 0.0
    for a, b in zip(loop[:-1], loop[1:]):
        total -= np.angle(np.vdot(a, b))
    return float(total)


def dynamical_phase_numeric(schedule: StaSchedule, n_steps: int = config.DEFAULT_N_STEPS,
                            segment: Optional[Segment] = None) -> float:
    """
    ∫E(t)dt of the followed eigenvalue (trapezoid rule)

    Args:
        schedule: STA schedule
        n_steps: Number of quadrature intervals over the full gate
        segment: Restrict to one half; None integrates over [0, T]

    Returns:
        Phase in radians
    """
    track = track_branch(schedule, n_steps)
    first = trapezoid(track.eigenvalues_first, track.tau)
    second = trapezoid(track.eigenvalues_second, track.tau)
    if segment is Segment.FIRST_HALF:
        return float(first)
    if segment is Segment.SECOND_HALF:
        return float(second)
    return float(first + second)


def phase_report(schedule: StaSchedule, n_steps: int = config.DEFAULT_N_STEPS) -> PhaseReport:
    """
    Geometric and dynamical phases of the bright state, checked against the simulated propagator

    ``total`` is the bright-state phase measured from the propagator relative to the dark state,
    unwrapped onto the branch nearest geometric + dynamical.
    """
    geometric = geometric_phase_numeric(schedule, n_steps)
    dynamical = -dynamical_phase_numeric(schedule, n_steps)
    u3 = evolve_unitary(schedule, HamiltonianKind.STA, NO_ERROR, n_steps).final_unitary
    bright, dark = bright_dark_pair(schedule.gate)
    measured = np.angle(np.vdot(bright, u3 @ bright)) - np.angle(np.vdot(dark, u3 @ dark))
    predicted = geometric + dynamical
    total = predicted + _wrap(measured - predicted)
    logger.info(f"Phases: geometric={geometric:.6f}, dynamical={dynamical:.3e}, total={total:.6f}")
    return PhaseReport(geometric=geometric, dynamical=dynamical, total=total)
