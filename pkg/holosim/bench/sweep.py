"""
Control-error robustness sweeps
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence

import logging
import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from holosim.bench.calibration import gate_process_fidelity
from holosim.bench.schemes import SchemeName, build_schedule, coherent_fidelity, parse_scheme
from holosim.config import DEFAULT_DURATION_T_S, config
from holosim.control.schedule import DEFAULT_OMEGA_A, ErrorModel, GateSpec
from holosim.exceptions import HoloSimError, InvalidInputError
from holosim.propagation.noise import NoiseModel

logger = logging.getLogger(__name__)

MAX_ABS_ALPHA = 0.5


class SweepResult(BaseModel):
    """Fidelity against the control-error magnitude α for one scheme"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    scheme: SchemeName
    gate: GateSpec
    gate_label: str = "custom"
    alphas: List[float]
    fidelities: List[Optional[float]]
    noise_enabled: bool
    alpha_mode: str = "total"
    errors: List[Dict[str, str]] = Field(default_factory=list)

    def mean_fidelity(self) -> float:
        values = [f for f in self.fidelities if f is not None]
        return float(np.mean(values)) if values else float("nan")

    def rows(self) -> List[dict]:
        return [
            {
                "scheme": self.scheme.value,
                "gate": self.gate_label,
                "alpha": alpha,
                "fidelity": fidelity,
                "noise_enabled": self.noise_enabled,
            }
            for alpha, fidelity in zip(self.alphas, self.fidelities)
        ]


def _check_alphas(alphas: Sequence[float]) -> List[float]:
    alphas = [float(a) for a in alphas]
    if not alphas:
        raise InvalidInputError("alphas must not be empty")
    bad = [a for a in alphas if not abs(a) < MAX_ABS_ALPHA]
    if bad:
        raise InvalidInputError(f"alphas must lie in (-{MAX_ABS_ALPHA}, {MAX_ABS_ALPHA}); got {bad}")
    return alphas


def sweep_alpha(
    scheme: SchemeName,
    gate: GateSpec,
    alphas: Sequence[float],
    noise: NoiseModel,
    duration_T: float = DEFAULT_DURATION_T_S,
    omega_a: float = DEFAULT_OMEGA_A,
    coefficients: Sequence[float] = (),
    alpha_mode: str = "total",
    n_steps: int = config.DEFAULT_N_STEPS,
    gate_label: str = "custom",
) -> SweepResult:
    """
    Gate fidelity of one scheme for each control-error magnitude α

    Noiseless points use the gate fidelity of the projected block; noisy points use the process
    fidelity of the reconstructed χ. A failing point is logged and recorded in ``errors`` with a
    null fidelity, and the sweep continues.

    Args:
        scheme: StaBaseline, Nhqc or StaOptimized
        gate: Target gate parameters
        alphas: Error magnitudes in (-0.5, 0.5)
        noise: Decoherence model (``enabled=False`` for coherent sweeps)
        duration_T: Gate duration in seconds
        omega_a: Peak Rabi frequency in rad/s
        coefficients: Shape coefficients for StaOptimized
        alpha_mode: "total" scales the counterdiabatic term too, "bare" only the bare Ω
        n_steps: Propagation steps per point
        gate_label: Name written to the export

    Returns:
        SweepResult with one fidelity (or null) per α
    """
    scheme = parse_scheme(scheme)
    alphas = _check_alphas(alphas)
    if alpha_mode not in ("total", "bare"):
        raise InvalidInputError(f"alpha_mode must be 'total' or 'bare', got '{alpha_mode}'")
    schedule = build_schedule(scheme, gate, duration_T, omega_a, coefficients)

    def evaluate(alpha: float):
        err = ErrorModel(alpha_rabi=alpha, scale_counterdiabatic=alpha_mode == "total")
        try:
            if noise.enabled:
                fidelity, _ = gate_process_fidelity(schedule, gate, noise, err, n_steps)
            else:
                fidelity = coherent_fidelity(schedule, gate, err, n_steps)
            return fidelity, None
        except (HoloSimError, np.linalg.LinAlgError) as e:
            logger.error(f"Sweep point alpha={alpha} failed for {scheme.value}: {e}")
            return None, {"alpha": str(alpha), "error": str(e)}

    with ThreadPoolExecutor(max_workers=config.MAX_WORKERS) as pool:
        outcomes = list(pool.map(evaluate, alphas))

    fidelities = [fidelity for fidelity, _ in outcomes]
    errors = [error for _, error in outcomes if error is not None]
    logger.info(f"Sweep {scheme.value}/{gate_label}: {len(alphas)} points, {len(errors)} failed")
    return SweepResult(
        scheme=scheme,
        gate=gate,
        gate_label=gate_label,
        alphas=alphas,
        fidelities=fidelities,
        noise_enabled=noise.enabled,
        alpha_mode=alpha_mode,
        errors=errors,
    )
