"""
Tests for the small dense linear algebra layer
"""
import math

import numpy as np
import pytest

from holosim.core.linalg import (
    KET_E,
    PAULI,
    as_density_matrix,
    as_square_matrix,
    as_state_vector,
    average_gate_fidelity,
    embed_qubit_state,
    global_phase_align,
    hermitian_exponential,
    is_unitary,
    leaky_gate_fidelity,
    max_norm,
    ordered_product,
    projector,
    random_unitary,
    state_fidelity,
)
from holosim.exceptions import InvalidInputError


class TestHermitianExponential:

    def test_pauli_x_rotation(self):
        s = 0.37
        expected = math.cos(s) * np.eye(2) - 1j * math.sin(s) * PAULI["X"]
        assert max_norm(hermitian_exponential(PAULI["X"], s) - expected) < 1e-14

    def test_zero_generator_is_identity(self):
        assert max_norm(hermitian_exponential(np.zeros((3, 3)), 5.0) - np.eye(3)) == 0.0

    def test_stacked_generators(self, rng):
        a = rng.standard_normal((5, 3, 3)) + 1j * rng.standard_normal((5, 3, 3))
        h = a + np.conj(np.swapaxes(a, -1, -2))
        stacked = hermitian_exponential(h, 0.2)
        assert stacked.shape == (5, 3, 3)
        for k in range(5):
            assert max_norm(stacked[k] - hermitian_exponential(h[k], 0.2)) < 1e-13
            assert is_unitary(stacked[k], 1e-12)

    def test_unitary_for_random_generators(self, rng):
        for _ in range(1000):
            a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            s = rng.uniform(-10.0, 10.0)
            assert is_unitary(hermitian_exponential(a + a.conj().T, s), 1e-12)

    def test_pauli_x_half_turn(self):
        assert max_norm(hermitian_exponential(PAULI["X"], math.pi) + np.eye(2)) < 1e-14

    def test_diagonal_generator(self):
        expected = np.diag(np.exp(-0.7j * np.array([1.0, 2.0, 3.0])))
        assert max_norm(hermitian_exponential(np.diag([1.0, 2.0, 3.0]), 0.7) - expected) < 1e-14

    def test_rejects_non_hermitian(self):
        with pytest.raises(InvalidInputError, match="Hermitian"):
            hermitian_exponential(np.array([[0, 1], [0, 0]], dtype=complex), 1.0)


class TestOrderedProduct:

    def test_later_steps_act_on_the_left(self):
        a, b = PAULI["X"], PAULI["Z"]
        assert max_norm(ordered_product(np.array([a, b])) - b @ a) == 0.0

    def test_odd_stack(self, rng):
        steps = np.array([random_unitary(3, rng) for _ in range(7)])
        expected = np.eye(3)
        for u in steps:
            expected = u @ expected
        assert max_norm(ordered_product(steps) - expected) < 1e-13

    def test_empty_stack(self):
        with pytest.raises(InvalidInputError):
            ordered_product(np.zeros((0, 2, 2)))


class TestCarriers:

    def test_square_matrix_dimensions(self):
        as_square_matrix(np.eye(4))
        with pytest.raises(InvalidInputError):
            as_square_matrix(np.eye(5))

    def test_unitary_flag(self):
        with pytest.raises(InvalidInputError, match="unitary"):
            as_square_matrix(2 * np.eye(2), unitary=True)

    def test_state_vector_norm(self):
        with pytest.raises(InvalidInputError, match="norm"):
            as_state_vector([1.0, 1.0])

    def test_carriers_are_read_only(self):
        psi = as_state_vector([1.0, 0.0, 0.0])
        with pytest.raises(ValueError):
            psi[0] = 0.0

    def test_density_matrix_validation(self):
        as_density_matrix(np.diag([0.5, 0.5, 0.0]))
        with pytest.raises(InvalidInputError, match="trace"):
            as_density_matrix(np.diag([0.5, 0.6, 0.0]))
        with pytest.raises(InvalidInputError, match="negative"):
            as_density_matrix(np.diag([1.5, -0.5]))

    def test_embed_qubit_state(self):
        rho3 = embed_qubit_state(projector(np.array([1.0, 1.0]) / math.sqrt(2)))
        assert rho3.shape == (3, 3)
        assert rho3[2, 2] == 0.0
        assert np.trace(rho3).real == pytest.approx(1.0)


class TestFidelities:

    def test_same_gate(self, rng):
        u = random_unitary(2, rng)
        assert average_gate_fidelity(u, u) == pytest.approx(1.0, abs=1e-12)

    def test_global_phase_invariance(self, rng):
        u = random_unitary(2, rng)
        assert average_gate_fidelity(u, np.exp(0.8j) * u) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_paulis(self):
        assert average_gate_fidelity(PAULI["X"], PAULI["I"]) == pytest.approx(1.0 / 3.0)

    def test_rejects_non_unitary(self):
        with pytest.raises(InvalidInputError):
            average_gate_fidelity(0.5 * np.eye(2), np.eye(2))

    def test_leaky_fidelity_matches_unitary_case(self, rng):
        u, v = random_unitary(2, rng), random_unitary(2, rng)
        assert leaky_gate_fidelity(u, v) == pytest.approx(average_gate_fidelity(u, v), abs=1e-12)

    def test_leaky_fidelity_penalizes_loss(self):
        assert leaky_gate_fidelity(np.zeros((2, 2)), np.eye(2)) == 0.0
        assert leaky_gate_fidelity(np.diag([1.0, 0.0]), np.eye(2)) < 1.0

    def test_global_phase_align(self, rng):
        u = random_unitary(2, rng)
        aligned = global_phase_align(np.exp(2.1j) * u, u)
        assert max_norm(aligned - u) < 1e-12

    def test_fidelity_is_symmetric(self, rng):
        u, v = random_unitary(2, rng), random_unitary(2, rng)
        assert average_gate_fidelity(u, v) == pytest.approx(average_gate_fidelity(v, u), abs=1e-14)

    def test_global_phase_align_is_idempotent(self, rng):
        u, v = random_unitary(2, rng), random_unitary(2, rng)
        once = global_phase_align(u, v)
        assert max_norm(global_phase_align(once, v) - once) < 1e-14

    def test_global_phase_align_without_overlap(self):
        u = np.exp(0.9j) * PAULI["X"]
        assert np.array_equal(global_phase_align(u, PAULI["Z"]), u)

    def test_state_fidelity(self):
        psi = np.array([1.0, 0.0, 0.0], dtype=complex)
        assert state_fidelity(projector(psi), psi) == pytest.approx(1.0)
        assert state_fidelity(np.diag([0.0, 1.0, 0.0]), psi) == 0.0

    def test_state_fidelity_of_mixed_state(self):
        assert state_fidelity(np.eye(3) / 3, KET_E) == pytest.approx(1.0 / 3.0)
