"""
Final-state sweeps over one holonomy parameter, compared against the closed-form gate
"""
from dataclasses import replace
from typing import Optional, Sequence

import logging
import numpy as np
import pandas as pd

from holosim.config import DEFAULT_DURATION_T_S, config
from holosim.control.schedule import DEFAULT_OMEGA_A, GateSpec, NO_ERROR, StaSchedule, TwoSegmentSchedule
from holosim.core.linalg import embed_qubit_state, projector
from holosim.exceptions import InvalidInputError
from holosim.gates.holonomy import drive_spec_for, holonomy_matrix
from holosim.hamiltonian.builder import HamiltonianKind
from holosim.propagation.evolve import evolve_lindblad, evolve_unitary
from holosim.propagation.noise import NoiseModel
from holosim.tomography.process import EXACT_INPUTS, pauli_expectations

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["parameter", "value", "p0", "p1", "pe", "x", "y", "z", "p0_predicted", "p1_predicted"]

_FIELDS = {"theta": "theta", "phi": "phi_rel", "gamma": "gamma"}


def initial_qubit_state(label: str) -> np.ndarray:
    try:
        return EXACT_INPUTS[label]
    except KeyError:
        raise InvalidInputError(f"Unknown initial state '{label}'; use one of {', '.join(EXACT_INPUTS)}") from None


def final_state_populations(
    schedule: TwoSegmentSchedule,
    psi2: np.ndarray,
    noise: NoiseModel,
    n_steps: int = config.DEFAULT_N_STEPS,
) -> np.ndarray:
    """3x3 density matrix after the schedule acts on the qubit state ``psi2``"""
    rho0 = embed_qubit_state(projector(psi2))
    if noise.enabled:
        return evolve_lindblad(schedule, HamiltonianKind.STA, NO_ERROR, noise, rho0, n_steps).final_rho
    u3 = evolve_unitary(schedule, HamiltonianKind.STA, NO_ERROR, n_steps).final_unitary
    return u3 @ rho0 @ u3.conj().T


def sweep_gate_parameter(
    parameter: str,
    values: Sequence[float],
    base: GateSpec,
    initial_state: str = "0",
    noise: Optional[NoiseModel] = None,
    duration_T: float = DEFAULT_DURATION_T_S,
    omega_a: float = DEFAULT_OMEGA_A,
    n_steps: int = config.DEFAULT_N_STEPS,
) -> pd.DataFrame:
    """
    Simulate the STA gate while one of θ, φ, γ is varied

    Args:
        parameter: "theta", "phi" or "gamma"
        values: Parameter values, each must give a valid GateSpec
        base: Gate providing the two fixed parameters
        initial_state: "0", "1", "+" or "+i"
        noise: Decoherence model, noiseless when omitted
        duration_T: Gate duration in seconds
        omega_a: Peak Rabi frequency in rad/s
        n_steps: Propagation steps

    Returns:
        DataFrame with simulated populations, Pauli expectations and closed-form populations
    """
    if parameter not in _FIELDS:
        raise InvalidInputError(f"parameter must be one of {', '.join(_FIELDS)}, got '{parameter}'")
    noise = noise or NoiseModel.disabled()
    psi2 = initial_qubit_state(initial_state)

    rows = []
    for value in values:
        target = replace(base, **{_FIELDS[parameter]: float(value)})
        schedule = StaSchedule.for_gate(drive_spec_for(target), omega_a, duration_T)
        rho = final_state_populations(schedule, psi2, noise, n_steps)
        x, y, z, leak = pauli_expectations(rho)
        predicted = np.abs(holonomy_matrix(target) @ psi2) ** 2
        rows.append({
            "parameter": parameter,
            "value": float(value),
            "p0": float(rho[0, 0].real),
            "p1": float(rho[1, 1].real),
            "pe": leak,
            "x": x,
            "y": y,
            "z": z,
            "p0_predicted": float(predicted[0]),
            "p1_predicted": float(predicted[1]),
        })
    logger.info(f"Swept {parameter} over {len(rows)} values from |{initial_state}>")
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)
