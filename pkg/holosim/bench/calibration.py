"""
Calibration of gate duration and of the NHQC second-pulse phase
"""
from typing import Optional, Tuple

import logging
import math
import numpy as np
from scipy.optimize import brentq, minimize_scalar

from holosim.config import config
from holosim.control.schedule import (
    DEFAULT_OMEGA_A,
    ErrorModel,
    GateSpec,
    NO_ERROR,
    NhqcSchedule,
    StaSchedule,
    TwoSegmentSchedule,
)
from holosim.exceptions import OutOfRangeError
from holosim.gates.holonomy import drive_spec_for, holonomy_matrix
from holosim.propagation.noise import NoiseModel
from holosim.tomography.process import (
    ChiMatrix,
    gate_preparations,
    process_chi,
    process_fidelity,
    simulated_channel,
)
from holosim.bench.schemes import coherent_fidelity, kind_for

logger = logging.getLogger(__name__)

TARGET_X_FIDELITY = 0.984
DURATION_BRACKET_S = (0.05e-6, 1.0e-6)
NHQC_SCAN_POINTS = 32


def gate_process_fidelity(
    schedule: TwoSegmentSchedule,
    target: GateSpec,
    noise: NoiseModel,
    err: ErrorModel = NO_ERROR,
    n_steps: int = config.DEFAULT_N_STEPS,
    preparation: str = "exact",
) -> Tuple[float, ChiMatrix]:
    """
    Process fidelity of a simulated schedule against holonomy_matrix(target)

    Returns:
        (fidelity, reconstructed χ)
    """
    preparations = None
    if preparation == "gates":
        preparations = gate_preparations(getattr(schedule, "omega_a", DEFAULT_OMEGA_A), schedule.duration_T)
    channel = simulated_channel(schedule, noise, err, n_steps, kind_for(schedule),
                                label=type(schedule).__name__, preparation_schedules=preparations)
    chi = process_chi(channel, preparation)
    return process_fidelity(chi, holonomy_matrix(target)), chi


def calibrate_duration(
    target: GateSpec,
    target_fidelity: float = TARGET_X_FIDELITY,
    noise: Optional[NoiseModel] = None,
    bracket: Tuple[float, float] = DURATION_BRACKET_S,
    omega_a: float = DEFAULT_OMEGA_A,
    n_steps: int = config.OPTIMIZER_N_STEPS,
    xtol: float = 1e-10,
) -> float:
    """
    Duration T at which the noisy STA gate reaches ``target_fidelity``

    Args:
        target: Gate to calibrate on (X for the reference device)
        target_fidelity: Process fidelity to match
        noise: Decoherence model, defaults to the reference device
        bracket: Search interval in seconds
        omega_a: Peak Rabi frequency in rad/s
        n_steps: Propagation steps per evaluation
        xtol: Absolute tolerance on T in seconds

    Returns:
        Calibrated duration in seconds
    """
    noise = noise or NoiseModel()

    def excess(duration_T: float) -> float:
        schedule = StaSchedule.for_gate(drive_spec_for(target), omega_a, duration_T)
        fidelity, _ = gate_process_fidelity(schedule, target, noise, n_steps=n_steps)
        return fidelity - target_fidelity

    low, high = bracket
    f_low, f_high = excess(low), excess(high)
    if f_low * f_high > 0:
        raise OutOfRangeError(
            f"Target fidelity {target_fidelity} not bracketed by T in [{low:.2e}, {high:.2e}] s "
            f"(fidelities {f_low + target_fidelity:.4f}, {f_high + target_fidelity:.4f})"
        )
    duration_T = brentq(excess, low, high, xtol=xtol)
    logger.info(f"Calibrated duration T={duration_T * 1e6:.4f} us for F={target_fidelity}")
    return float(duration_T)


def calibrate_nhqc_offset(
    target: GateSpec,
    omega_a: float = DEFAULT_OMEGA_A,
    duration_T: float = 0.5e-6,
    n_steps: int = config.OPTIMIZER_N_STEPS,
) -> float:
    """
    Second-pulse phase offset of the NHQC baseline that best realizes holonomy_matrix(target)

    A coarse scan over [0, 2π) is refined with a bounded scalar search around the best point.
    """
    drive = drive_spec_for(target)

    def infidelity(offset: float) -> float:
        schedule = NhqcSchedule.for_gate(drive, omega_a, duration_T, phase_offset=offset)
        return 1.0 - coherent_fidelity(schedule, target, NO_ERROR, n_steps)

    grid = np.linspace(0.0, 2 * math.pi, NHQC_SCAN_POINTS, endpoint=False)
    scores = [infidelity(x) for x in grid]
    best = grid[int(np.argmin(scores))]
    spacing = grid[1] - grid[0]
    refined = minimize_scalar(infidelity, bounds=(best - spacing, best + spacing), method="bounded",
                              options={"xatol": 1e-8})
    offset = float(np.mod(refined.x, 2 * math.pi))
    logger.info(f"NHQC phase offset calibrated to {offset:.6f} rad (infidelity {refined.fun:.2e})")
    return offset
