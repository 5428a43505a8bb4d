"""
Shared pytest fixtures for HoloSim
"""
import math

import numpy as np
import pytest

from holosim.bench.calibration import calibrate_duration
from holosim.control.schedule import DEFAULT_OMEGA_A, GateSpec, StaSchedule
from holosim.config import DEFAULT_DURATION_T_S
from holosim.gates.holonomy import NAMED_GATES, drive_spec_for, named_gate
from holosim.propagation.noise import NoiseModel

OMEGA_A = DEFAULT_OMEGA_A
DURATION_T = DEFAULT_DURATION_T_S
# Noisy runs use a reduced step count; the gate error they measure is dominated by decoherence
NOISY_STEPS = 2000


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=sorted(NAMED_GATES))
def gate_name(request):
    return request.param


@pytest.fixture
def sta_schedule_for():
    """Factory: STA schedule realizing a target gate"""
    def build(target, duration_T=DURATION_T, omega_a=OMEGA_A):
        return StaSchedule.for_gate(drive_spec_for(target), omega_a, duration_T)
    return build


@pytest.fixture(scope="session")
def default_noise():
    return NoiseModel()


@pytest.fixture(scope="session")
def calibrated_duration(default_noise):
    """Duration at which the simulated X gate reaches process fidelity 0.984"""
    return calibrate_duration(named_gate("X"), noise=default_noise, n_steps=NOISY_STEPS)


def random_gate_spec(rng):
    return GateSpec(
        theta=float(rng.uniform(0.0, math.pi)),
        phi_rel=float(rng.uniform(0.0, 2 * math.pi)),
        gamma=float(rng.uniform(-2 * math.pi + 1e-6, 2 * math.pi - 1e-6)),
    )
