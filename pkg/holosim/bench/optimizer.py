"""
Derivative-free shaping of the STA mixing profile for control-error robustness
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence

import logging
import numpy as np
from pydantic import BaseModel, Field
from scipy.optimize import minimize

from holosim.bench.schemes import coherent_fidelity
from holosim.config import DEFAULT_DURATION_T_S, config
from holosim.control.schedule import (
    DEFAULT_OMEGA_A,
    ErrorModel,
    GateSpec,
    MAX_SHAPE_TERMS,
    MAX_SHAPE_WEIGHT,
    StaSchedule,
)
from holosim.exceptions import InvalidInputError
from holosim.gates.holonomy import drive_spec_for

logger = logging.getLogger(__name__)

MIN_BUDGET = 100
SIMPLEX_STEP = 0.02


class OptimizationOutcome(BaseModel):
    """Best shape coefficients found and the objective trail"""
    params: List[float]
    objective_before: float
    objective_after: float
    evaluations: int
    alpha_grid: List[float]
    restarts: int = 0
    history: List[Dict] = Field(default_factory=list)


class ScheduleOptimizer:
    """
    Minimize the mean noiseless infidelity over an α grid with Nelder-Mead

    The search runs over the shape coefficients c₁..c_K of the STA mixing profile. Points outside
    the feasible set Σ k|c_k| ≤ 0.24 score 1 + excess weight, above any feasible objective. One
    seeded restart from the incumbent is made while budget remains.
    """

    def __init__(
        self,
        gate: GateSpec,
        alpha_grid: Sequence[float],
        family_dim: int = 4,
        budget: int = 500,
        seed: int = 1234,
        duration_T: float = DEFAULT_DURATION_T_S,
        omega_a: float = DEFAULT_OMEGA_A,
        alpha_mode: str = "total",
        n_steps: int = config.OPTIMIZER_N_STEPS,
    ):
        if not 1 <= family_dim <= MAX_SHAPE_TERMS:
            raise InvalidInputError(f"family_dim must be in [1, {MAX_SHAPE_TERMS}], got {family_dim}")
        if budget < MIN_BUDGET:
            raise InvalidInputError(f"budget must be >= {MIN_BUDGET} evaluations, got {budget}")
        if not alpha_grid:
            raise InvalidInputError("alpha_grid must not be empty")
        self.gate = gate
        self.alpha_grid = [float(a) for a in alpha_grid]
        self.family_dim = family_dim
        self.budget = budget
        self.rng = np.random.default_rng(seed)
        self.duration_T = duration_T
        self.omega_a = omega_a
        self.scale_counterdiabatic = alpha_mode == "total"
        self.n_steps = n_steps

        self.drive = drive_spec_for(gate)
        self.evaluations = 0
        self.history: List[Dict] = []
        self.best_params = np.zeros(family_dim)
        self.best_value = np.inf

    def _penalty(self, params: np.ndarray) -> float:
        weight = float(np.sum(np.arange(1, params.size + 1) * np.abs(params)))
        return max(0.0, weight - MAX_SHAPE_WEIGHT)

    def mean_infidelity(self, params: np.ndarray) -> float:
        schedule = StaSchedule.for_gate(self.drive, self.omega_a, self.duration_T, tuple(params))

        def infidelity(alpha: float) -> float:
            err = ErrorModel(alpha_rabi=alpha, scale_counterdiabatic=self.scale_counterdiabatic)
            return 1.0 - coherent_fidelity(schedule, self.gate, err, self.n_steps)

        with ThreadPoolExecutor(max_workers=config.MAX_WORKERS) as pool:
            values = list(pool.map(infidelity, self.alpha_grid))
        return float(np.mean(values))

    def _cost(self, params: np.ndarray) -> float:
        params = np.asarray(params, dtype=float)
        if self.evaluations >= self.budget:
            return self.best_value if np.isfinite(self.best_value) else 1.0
        self.evaluations += 1
        excess = self._penalty(params)
        value = 1.0 + excess if excess > 0 else self.mean_infidelity(params)
        self.history.append({
            "iteration": self.evaluations,
            "params": [float(p) for p in params],
            "objective": value,
        })
        if value < self.best_value:
            self.best_value = value
            self.best_params = params.copy()
        return value

    def _simplex(self, center: np.ndarray, jitter: bool) -> np.ndarray:
        steps = np.full(self.family_dim, SIMPLEX_STEP)
        if jitter:
            steps = steps * self.rng.choice([-1.0, 1.0], size=self.family_dim)
        # scale by 1/k so every vertex stays feasible around the origin
        steps = steps / np.arange(1, self.family_dim + 1)
        vertices = [center]
        for k in range(self.family_dim):
            vertex = center.copy()
            vertex[k] += steps[k]
            vertices.append(vertex)
        return np.array(vertices)

    def _search(self, center: np.ndarray, jitter: bool) -> None:
        remaining = self.budget - self.evaluations
        if remaining <= self.family_dim + 1:
            return
        minimize(
            self._cost,
            center,
            method="Nelder-Mead",
            options={
                "initial_simplex": self._simplex(center, jitter),
                "maxfev": remaining,
                "xatol": 1e-6,
                "fatol": 1e-12,
            },
        )

    def run(self) -> OptimizationOutcome:
        baseline = np.zeros(self.family_dim)
        objective_before = self._cost(baseline)
        logger.info(f"Optimizing {self.family_dim} shape terms over alpha={self.alpha_grid}; "
                    f"baseline objective {objective_before:.3e}")

        self._search(baseline, jitter=False)
        restarts = 0
        if self.budget - self.evaluations > self.family_dim + 1:
            restarts = 1
            self._search(self.best_params.copy(), jitter=True)

        if self.best_value < objective_before:
            params, objective_after = self.best_params, self.best_value
        else:
            logger.info("No improvement over the baseline profile")
            params, objective_after = baseline, objective_before
        logger.info(f"Optimization finished after {self.evaluations} evaluations: "
                    f"{objective_before:.3e} -> {objective_after:.3e}")
        return OptimizationOutcome(
            params=[float(p) for p in params],
            objective_before=objective_before,
            objective_after=objective_after,
            evaluations=self.evaluations,
            alpha_grid=self.alpha_grid,
            restarts=restarts,
            history=self.history,
        )


def optimize_schedule(
    gate: GateSpec,
    alpha_grid: Sequence[float],
    family_dim: int = 4,
    budget: int = 500,
    seed: int = 1234,
    duration_T: float = DEFAULT_DURATION_T_S,
    omega_a: float = DEFAULT_OMEGA_A,
    alpha_mode: str = "total",
    n_steps: Optional[int] = None,
) -> OptimizationOutcome:
    """
    Optimize the STA shape coefficients for robustness against Rabi-amplitude errors

    Args:
        gate: Target gate
        alpha_grid: Error magnitudes averaged in the objective
        family_dim: Number of shape coefficients (at most 8)
        budget: Maximum objective evaluations (at least 100)
        seed: Seed of the restart simplex orientation
        duration_T: Gate duration in seconds
        omega_a: Peak Rabi frequency in rad/s
        alpha_mode: "total" or "bare"
        n_steps: Propagation steps per evaluation

    Returns:
        OptimizationOutcome with objective_after <= objective_before
    """
    optimizer = ScheduleOptimizer(
        gate, alpha_grid, family_dim, budget, seed, duration_T, omega_a, alpha_mode,
        n_steps or config.OPTIMIZER_N_STEPS,
    )
    return optimizer.run()
