"""
Gate schemes compared by the robustness bench
"""
from enum import Enum
from typing import Sequence

import logging

from holosim.control.schedule import (
    DEFAULT_OMEGA_A,
    ErrorModel,
    GateSpec,
    NHQC_PHASE_OFFSET,
    NhqcSchedule,
    StaSchedule,
    TwoSegmentSchedule,
)
from holosim.config import DEFAULT_DURATION_T_S
from holosim.core.linalg import leaky_gate_fidelity
from holosim.exceptions import InvalidInputError
from holosim.gates.holonomy import drive_spec_for, holonomy_matrix
from holosim.hamiltonian.builder import HamiltonianKind
from holosim.propagation.evolve import evolve_unitary

logger = logging.getLogger(__name__)


class SchemeName(str, Enum):
    STA_BASELINE = "StaBaseline"
    NHQC = "Nhqc"
    STA_OPTIMIZED = "StaOptimized"


def parse_scheme(value) -> SchemeName:
    try:
        return SchemeName(value)
    except ValueError:
        known = ", ".join(s.value for s in SchemeName)
        raise InvalidInputError(f"Unknown scheme '{value}'; known schemes: {known}") from None


def build_schedule(
    scheme: SchemeName,
    target: GateSpec,
    duration_T: float = DEFAULT_DURATION_T_S,
    omega_a: float = DEFAULT_OMEGA_A,
    coefficients: Sequence[float] = (),
    nhqc_phase_offset: float = NHQC_PHASE_OFFSET,
) -> TwoSegmentSchedule:
    """
    Schedule realizing ``holonomy_matrix(target)`` under the given scheme

    StaOptimized requires the optimized shape coefficients; StaBaseline ignores them.
    """
    scheme = parse_scheme(scheme)
    drive = drive_spec_for(target)
    if scheme is SchemeName.NHQC:
        return NhqcSchedule.for_gate(drive, omega_a, duration_T, nhqc_phase_offset)
    if scheme is SchemeName.STA_OPTIMIZED:
        if not coefficients:
            raise InvalidInputError("StaOptimized needs shape coefficients from optimize_schedule")
        return StaSchedule.for_gate(drive, omega_a, duration_T, tuple(coefficients))
    return StaSchedule.for_gate(drive, omega_a, duration_T)


def kind_for(schedule: TwoSegmentSchedule) -> HamiltonianKind:
    """NHQC pulses carry no counterdiabatic term"""
    return HamiltonianKind.BARE if isinstance(schedule, NhqcSchedule) else HamiltonianKind.STA


def coherent_fidelity(
    schedule: TwoSegmentSchedule,
    target: GateSpec,
    err: ErrorModel,
    n_steps: int,
) -> float:
    """
    Noiseless gate fidelity of a schedule against holonomy_matrix(target)

    Scored on the raw projected qubit block, so population left in |e> counts as error. For a
    leakage-free block this is the ordinary average gate fidelity.
    """
    u3 = evolve_unitary(schedule, kind_for(schedule), err, n_steps).final_unitary
    return leaky_gate_fidelity(u3[:2, :2], holonomy_matrix(target))
