"""
Tests for the robustness bench: sweeps, calibration, optimizer and parameter sweeps
"""
import math

import numpy as np
import pytest

from conftest import DURATION_T, NOISY_STEPS
from holosim.bench.calibration import calibrate_duration, calibrate_nhqc_offset, gate_process_fidelity
from holosim.bench.optimizer import ScheduleOptimizer, optimize_schedule
from holosim.bench.parameter_sweep import SWEEP_COLUMNS, sweep_gate_parameter
from holosim.bench.schemes import SchemeName, build_schedule, kind_for, parse_scheme
from holosim.bench.sweep import sweep_alpha
from holosim.control.schedule import GateSpec, NhqcSchedule, StaSchedule, shape_feasible
from holosim.exceptions import InvalidInputError, OutOfRangeError
from holosim.gates.holonomy import drive_spec_for, named_gate
from holosim.hamiltonian.builder import HamiltonianKind
from holosim.propagation.noise import NoiseModel

COHERENT_STEPS = 2000
X = named_gate("X")


class TestSchemes:

    def test_parse(self):
        assert parse_scheme("Nhqc") is SchemeName.NHQC
        with pytest.raises(InvalidInputError, match="StaBaseline"):
            parse_scheme("Adiabatic")

    def test_build(self):
        assert isinstance(build_schedule(SchemeName.STA_BASELINE, X), StaSchedule)
        nhqc = build_schedule(SchemeName.NHQC, X)
        assert isinstance(nhqc, NhqcSchedule)
        assert kind_for(nhqc) is HamiltonianKind.BARE
        assert nhqc.gate == drive_spec_for(X)

    def test_optimized_needs_coefficients(self):
        with pytest.raises(InvalidInputError):
            build_schedule(SchemeName.STA_OPTIMIZED, X)
        schedule = build_schedule(SchemeName.STA_OPTIMIZED, X, coefficients=[0.05])
        assert schedule.shape_coefficients == (0.05,)


class TestAlphaSweep:

    @pytest.mark.parametrize("scheme", [SchemeName.STA_BASELINE, SchemeName.NHQC])
    def test_no_error_is_ideal(self, scheme):
        result = sweep_alpha(scheme, X, [0.0], NoiseModel.disabled(), n_steps=COHERENT_STEPS)
        assert result.fidelities[0] > 0.9999
        assert result.errors == []

    def test_fidelity_falls_with_error(self):
        alphas = np.linspace(-0.2, 0.2, 9)
        result = sweep_alpha(SchemeName.STA_BASELINE, X, alphas, NoiseModel.disabled(), n_steps=COHERENT_STEPS)
        f = result.fidelities
        assert all(a >= b for a, b in zip(f[4:], f[5:]))
        assert all(a <= b for a, b in zip(f[:4], f[1:5]))
        assert f[4] == max(f)

    @pytest.mark.parametrize("scheme", [SchemeName.STA_BASELINE, SchemeName.NHQC])
    def test_fidelity_peaks_at_zero_error(self, scheme):
        result = sweep_alpha(scheme, X, np.linspace(-0.1, 0.1, 9), NoiseModel.disabled(), n_steps=COHERENT_STEPS)
        f = result.fidelities
        assert all(a >= b for a, b in zip(f[4:], f[5:]))
        assert all(a <= b for a, b in zip(f[:4], f[1:5]))
        assert f[4] == max(f)

    def test_rows(self):
        result = sweep_alpha(SchemeName.NHQC, X, [0.0, 0.1], NoiseModel.disabled(), n_steps=COHERENT_STEPS,
                             gate_label="X")
        rows = result.rows()
        assert [r["alpha"] for r in rows] == [0.0, 0.1]
        assert rows[0]["scheme"] == "Nhqc"
        assert rows[1]["gate"] == "X"
        assert rows[1]["noise_enabled"] is False

    def test_failed_point_is_recorded(self, monkeypatch):
        def flaky(schedule, target, err, n_steps):
            if err.alpha_rabi == 0.1:
                raise InvalidInputError("synthetic failure")
            return 0.5

        monkeypatch.setattr("holosim.bench.sweep.coherent_fidelity", flaky)
        result = sweep_alpha(SchemeName.STA_BASELINE, X, [0.0, 0.1, -0.1], NoiseModel.disabled())
        assert result.fidelities == [0.5, None, 0.5]
        assert result.errors == [{"alpha": "0.1", "error": "synthetic failure"}]
        assert result.mean_fidelity() == 0.5

    @pytest.mark.parametrize("alphas", [[], [0.5], [-0.7, 0.0]])
    def test_invalid_alphas(self, alphas):
        with pytest.raises(InvalidInputError):
            sweep_alpha(SchemeName.STA_BASELINE, X, alphas, NoiseModel.disabled())

    def test_invalid_alpha_mode(self):
        with pytest.raises(InvalidInputError, match="alpha_mode"):
            sweep_alpha(SchemeName.STA_BASELINE, X, [0.0], NoiseModel.disabled(), alpha_mode="both")

    def test_reproducible(self):
        args = (SchemeName.STA_BASELINE, X, [-0.1, 0.05], NoiseModel.disabled())
        first = sweep_alpha(*args, n_steps=COHERENT_STEPS)
        second = sweep_alpha(*args, n_steps=COHERENT_STEPS)
        assert first.fidelities == second.fidelities

    def test_alpha_modes(self):
        def fidelities(mode):
            return sweep_alpha(SchemeName.STA_BASELINE, X, [0.0, 0.1], NoiseModel.disabled(),
                               alpha_mode=mode, n_steps=COHERENT_STEPS).fidelities

        total, bare = fidelities("total"), fidelities("bare")
        assert total[0] == bare[0]
        assert total[1] != pytest.approx(bare[1], abs=1e-9)

    def test_noisy_point(self, default_noise):
        result = sweep_alpha(SchemeName.STA_BASELINE, X, [0.0], default_noise, n_steps=NOISY_STEPS)
        assert result.noise_enabled
        assert 0.8 < result.fidelities[0] < 0.999


class TestCalibration:

    def test_duration(self, calibrated_duration, default_noise):
        assert 0.07e-6 < calibrated_duration < 0.15e-6
        schedule = StaSchedule.for_gate(drive_spec_for(X), duration_T=calibrated_duration)
        fidelity, chi = gate_process_fidelity(schedule, X, default_noise, n_steps=NOISY_STEPS)
        assert fidelity == pytest.approx(0.984, abs=1e-4)
        assert chi.trace <= 1.0

    def test_unreachable_fidelity(self, default_noise):
        with pytest.raises(OutOfRangeError, match="not bracketed"):
            calibrate_duration(X, target_fidelity=0.5, noise=default_noise, n_steps=NOISY_STEPS)

    def test_nhqc_offset(self):
        offset = calibrate_nhqc_offset(X, duration_T=DURATION_T, n_steps=COHERENT_STEPS)
        distance = abs(math.atan2(math.sin(offset - math.pi), math.cos(offset - math.pi)))
        assert distance < 1e-3


class TestOptimizer:

    def test_baseline_is_optimal_without_error(self):
        outcome = optimize_schedule(X, [0.0], family_dim=1, budget=100)
        assert outcome.objective_before < 1e-6
        assert outcome.objective_before - outcome.objective_after < 1e-6
        assert outcome.evaluations <= 100

    def test_improves_robustness(self):
        outcome = optimize_schedule(X, [-0.1, 0.0, 0.1], family_dim=4, budget=500, seed=7)
        assert outcome.objective_after < outcome.objective_before
        assert shape_feasible(outcome.params)
        assert len(outcome.params) == 4
        assert outcome.evaluations <= 500
        assert len(outcome.history) == outcome.evaluations
        assert outcome.history[0]["params"] == [0.0, 0.0, 0.0, 0.0]

    def test_optimized_schedule_sweeps_better(self):
        outcome = optimize_schedule(X, [-0.1, 0.1], family_dim=2, budget=200, seed=3)
        noise = NoiseModel.disabled()
        baseline = sweep_alpha(SchemeName.STA_BASELINE, X, [-0.1, 0.1], noise, n_steps=COHERENT_STEPS)
        optimized = sweep_alpha(SchemeName.STA_OPTIMIZED, X, [-0.1, 0.1], noise,
                                coefficients=outcome.params, n_steps=COHERENT_STEPS)
        assert optimized.mean_fidelity() >= baseline.mean_fidelity()

    def test_optimized_schedule_wins_across_grid(self):
        alphas = [-0.1, -0.05, 0.0, 0.05, 0.1]
        outcome = optimize_schedule(X, alphas, family_dim=4, budget=500)
        noise = NoiseModel.disabled()
        baseline = sweep_alpha(SchemeName.STA_BASELINE, X, alphas, noise, n_steps=COHERENT_STEPS)
        optimized = sweep_alpha(SchemeName.STA_OPTIMIZED, X, alphas, noise,
                                coefficients=outcome.params, n_steps=COHERENT_STEPS)
        assert optimized.mean_fidelity() > baseline.mean_fidelity()
        for opt, base in zip(optimized.fidelities, baseline.fidelities):
            assert opt >= base - 1e-9

    def test_seeded_runs_agree(self):
        first = optimize_schedule(X, [0.1], family_dim=2, budget=100, seed=11)
        second = optimize_schedule(X, [0.1], family_dim=2, budget=100, seed=11)
        assert first.params == second.params
        assert first.objective_after == second.objective_after

    def test_infeasible_points_are_penalized(self):
        optimizer = ScheduleOptimizer(X, [0.0], family_dim=2, budget=100)
        assert optimizer._cost(np.array([0.3, 0.0])) == pytest.approx(1.06)

    @pytest.mark.parametrize("kwargs", [
        {"family_dim": 0},
        {"family_dim": 9},
        {"budget": 99},
    ])
    def test_invalid_settings(self, kwargs):
        with pytest.raises(InvalidInputError):
            ScheduleOptimizer(X, [0.0], **kwargs)

    def test_empty_grid(self):
        with pytest.raises(InvalidInputError):
            ScheduleOptimizer(X, [])


class TestParameterSweep:

    def test_theta_sweep_follows_closed_form(self):
        thetas = np.linspace(0.0, math.pi, 5)
        frame = sweep_gate_parameter("theta", thetas, GateSpec(0.0, 0.0, math.pi), n_steps=COHERENT_STEPS)
        assert list(frame.columns) == SWEEP_COLUMNS
        assert len(frame) == 5
        for theta, row in zip(thetas, frame.itertuples()):
            assert row.p0_predicted == pytest.approx(math.cos(theta) ** 2, abs=1e-12)
            assert row.p0 == pytest.approx(row.p0_predicted, abs=1e-4)
            assert row.pe < 1e-6

    def test_gamma_sweep_from_plus(self):
        frame = sweep_gate_parameter("gamma", [0.5, 1.0], GateSpec(math.pi / 2, 0.0, 0.0), initial_state="+",
                                     n_steps=COHERENT_STEPS)
        assert np.allclose(frame["p1"], frame["p1_predicted"], atol=1e-4)

    def test_noise_adds_leakage(self, default_noise):
        frame = sweep_gate_parameter("theta", [math.pi / 2], GateSpec(0.0, 0.0, math.pi), noise=default_noise,
                                     n_steps=NOISY_STEPS)
        assert frame.loc[0, "p1"] < frame.loc[0, "p1_predicted"]

    def test_unknown_parameter(self):
        with pytest.raises(InvalidInputError, match="parameter"):
            sweep_gate_parameter("omega", [0.1], X)

    def test_unknown_initial_state(self):
        with pytest.raises(InvalidInputError):
            sweep_gate_parameter("theta", [0.1], X, initial_state="-")
