"""
Tests for closed-form holonomies, gate extraction and the numeric phase split
"""
import math

import numpy as np
import pytest

from conftest import OMEGA_A, random_gate_spec
from holosim.control.schedule import GateSpec, Segment, StaSchedule
from holosim.core.linalg import PAULI, average_gate_fidelity, global_phase_align, is_unitary, max_norm
from holosim.exceptions import GateNotFoundError, HighLeakageError, InvalidInputError
from holosim.gates.holonomy import (
    NAMED_GATES,
    drive_spec_for,
    extract_qubit_gate,
    holonomy_matrix,
    named_gate,
    realized_holonomy,
)
from holosim.gates.phases import dynamical_phase_numeric, geometric_phase_numeric, phase_report
from holosim.hamiltonian.builder import bright_dark_pair
from holosim.propagation.evolve import evolve_unitary

EXPECTED_GATES = {
    "I": np.eye(2),
    "Z": np.diag([-1.0, 1.0]),
    "X": PAULI["X"],
    "H": np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2),
    "Xhalf": (np.eye(2) - 1j * PAULI["X"]) / math.sqrt(2),
}


def embed(u2, phase=1.0):
    u3 = np.zeros((3, 3), dtype=complex)
    u3[:2, :2] = u2
    u3[2, 2] = phase
    return u3


class TestHolonomyMatrix:

    @pytest.mark.parametrize("name", sorted(EXPECTED_GATES))
    def test_named_gate_values(self, name):
        u = holonomy_matrix(named_gate(name))
        assert max_norm(global_phase_align(u, EXPECTED_GATES[name]) - EXPECTED_GATES[name]) < 1e-12

    def test_x_needs_no_alignment(self):
        assert max_norm(holonomy_matrix(named_gate("X")) - PAULI["X"]) < 1e-15

    def test_unitary_with_determinant(self, rng):
        for _ in range(50):
            g = random_gate_spec(rng)
            u = holonomy_matrix(g)
            assert is_unitary(u, 1e-14)
            assert abs(np.linalg.det(u) - np.exp(1j * g.gamma)) < 1e-14

    def test_zero_gamma_is_identity(self, rng):
        for _ in range(10):
            g = random_gate_spec(rng)
            u = holonomy_matrix(GateSpec(g.theta, g.phi_rel, 0.0))
            assert max_norm(u - np.eye(2)) < 1e-15

    def test_eigenvalues(self, rng):
        g = random_gate_spec(rng)
        values = np.sort_complex(np.linalg.eigvals(holonomy_matrix(g)))
        expected = np.sort_complex(np.array([1.0, np.exp(1j * g.gamma)]))
        assert max_norm(values - expected) < 1e-12

    def test_gates_do_not_commute(self):
        x, h = holonomy_matrix(named_gate("X")), holonomy_matrix(named_gate("H"))
        assert max_norm(x @ h - h @ x) > 0.5

    def test_unknown_gate(self):
        with pytest.raises(GateNotFoundError, match="Y"):
            named_gate("Y")

    def test_named_table(self):
        assert set(NAMED_GATES) == {"I", "Z", "X", "H", "Xhalf"}


class TestDriveConvention:

    def test_realized_matches_target(self, rng):
        for _ in range(50):
            g = random_gate_spec(rng)
            assert max_norm(realized_holonomy(drive_spec_for(g)) - holonomy_matrix(g)) < 1e-12

    def test_fixed_points(self, rng):
        for _ in range(20):
            g = random_gate_spec(rng)
            bright, dark = bright_dark_pair(drive_spec_for(g))
            b, d = bright[:2], dark[:2]
            u = holonomy_matrix(g)
            lam_b, lam_d = np.vdot(b, u @ b), np.vdot(d, u @ d)
            assert max_norm(u @ b - lam_b * b) < 1e-12
            assert max_norm(u @ d - lam_d * d) < 1e-12
            assert abs(lam_b) == pytest.approx(1.0, abs=1e-12)
            assert abs(lam_b / lam_d - np.exp(1j * g.gamma)) < 1e-12

    def test_drive_spec_stays_in_range(self):
        spec = drive_spec_for(GateSpec(1.0, 1.5 * math.pi, 0.4))
        assert spec.phi_rel == pytest.approx(0.5 * math.pi)
        assert spec.gamma == -0.4


class TestExtraction:

    def test_block_diagonal_input(self, rng):
        g = random_gate_spec(rng)
        target = holonomy_matrix(g)
        extracted = extract_qubit_gate(embed(target * np.exp(0.3j), np.exp(-1.1j)), reference=target)
        assert extracted.leakage < 1e-12
        assert extracted.global_phase_removed
        assert max_norm(extracted.qubit_unitary - target) < 1e-12

    def test_no_reference_keeps_phase(self):
        extracted = extract_qubit_gate(embed(1j * PAULI["Z"]))
        assert not extracted.global_phase_removed
        assert max_norm(extracted.qubit_unitary - 1j * PAULI["Z"]) < 1e-12

    def test_high_leakage(self):
        swap = np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=complex)
        with pytest.raises(HighLeakageError) as caught:
            extract_qubit_gate(swap)
        assert caught.value.leakage == pytest.approx(1.0)
        assert max_norm(caught.value.block - np.diag([1.0, 0.0])) == 0.0

    def test_rejects_non_unitary(self):
        with pytest.raises(InvalidInputError):
            extract_qubit_gate(2 * np.eye(3))


class TestSimulatedGates:

    @pytest.mark.parametrize("duration_T", [0.25e-6, 0.5e-6, 1.0e-6])
    def test_named_gates_end_to_end(self, gate_name, duration_T, sta_schedule_for):
        target = named_gate(gate_name)
        u3 = evolve_unitary(sta_schedule_for(target, duration_T)).final_unitary
        extracted = extract_qubit_gate(u3, reference=holonomy_matrix(target))
        assert extracted.leakage < 1e-6
        assert average_gate_fidelity(extracted.qubit_unitary, holonomy_matrix(target)) > 0.9999


def phase_schedule(gamma, duration_T=0.5e-6):
    return StaSchedule(GateSpec(math.pi / 2, 0.0, gamma), OMEGA_A, duration_T, gamma1=gamma, gamma2=0.0)


class TestPhases:

    @pytest.mark.parametrize("gamma", [math.pi / 2, math.pi, 3 * math.pi / 2])
    def test_geometric_phase(self, gamma):
        schedule = phase_schedule(gamma)
        assert abs(geometric_phase_numeric(schedule, 10000)) == pytest.approx(gamma, abs=1e-3)

    @pytest.mark.parametrize("gamma", [math.pi / 2, math.pi, 3 * math.pi / 2])
    def test_dynamical_phase_cancels(self, gamma):
        schedule = phase_schedule(gamma)
        assert abs(dynamical_phase_numeric(schedule, 10000)) < 1e-6 * OMEGA_A * schedule.duration_T

    def test_no_phase_jump_no_geometric_phase(self):
        schedule = StaSchedule(GateSpec(math.pi / 2, 0.0, 0.0), OMEGA_A, 0.5e-6, gamma1=0.7, gamma2=0.7)
        assert geometric_phase_numeric(schedule, 10000) == pytest.approx(0.0, abs=1e-6)

    def test_half_gate_phases(self):
        schedule = phase_schedule(math.pi)
        quarter = OMEGA_A * schedule.duration_T / 4
        first = dynamical_phase_numeric(schedule, 10000, segment=Segment.FIRST_HALF)
        second = dynamical_phase_numeric(schedule, 10000, segment=Segment.SECOND_HALF)
        assert first == pytest.approx(-quarter, rel=1e-4)
        assert second == pytest.approx(quarter, rel=1e-4)

    def test_report_total_matches_propagator(self):
        report = phase_report(phase_schedule(math.pi / 2), 10000)
        assert report.geometric == pytest.approx(-math.pi / 2, abs=1e-3)
        assert report.total == pytest.approx(report.geometric + report.dynamical, abs=1e-3)

    def test_minimum_steps(self):
        with pytest.raises(InvalidInputError):
            phase_report(phase_schedule(math.pi), 500)
