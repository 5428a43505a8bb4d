"""
CSV and JSON writers for simulation artifacts
"""
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

import json
import logging
import numpy as np
import pandas as pd

from holosim.control.schedule import ErrorModel, GateSpec, NO_ERROR, TwoSegmentSchedule
from holosim.core.linalg import PAULI_LABELS
from holosim.propagation.evolve import TrajectoryPoint

logger = logging.getLogger(__name__)

PULSE_COLUMNS = ["t_s", "omega0_rad_s", "omega1_rad_s", "phi0_rad", "phi1_rad", "delta_rad_s"]
TRAJECTORY_COLUMNS = ["t_s", "p0", "p1", "pe", "re_rho01", "im_rho01"]
SWEEP_COLUMNS = ["scheme", "gate", "alpha", "fidelity", "noise_enabled"]

DEFAULT_PULSE_SAMPLES = 1000

PathLike = Union[str, Path]


def _prepare(path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def pulses_frame(schedule: TwoSegmentSchedule, n_samples: int = DEFAULT_PULSE_SAMPLES,
                 err: ErrorModel = NO_ERROR) -> pd.DataFrame:
    """Tone amplitudes, phases and detuning on a uniform grid over [0, T]"""
    times = np.linspace(0.0, schedule.duration_T, n_samples)
    tones = schedule.tone_table(times, err)
    table = schedule.drive_table(times, err)
    return pd.DataFrame({
        "t_s": times,
        "omega0_rad_s": tones["omega0"],
        "omega1_rad_s": tones["omega1"],
        "phi0_rad": tones["phi0"],
        "phi1_rad": tones["phi1"],
        "delta_rad_s": table.delta,
    }, columns=PULSE_COLUMNS)


def trajectory_frame(points: Iterable[TrajectoryPoint]) -> pd.DataFrame:
    rows = [
        {
            "t_s": p.t,
            "p0": float(p.rho[0, 0].real),
            "p1": float(p.rho[1, 1].real),
            "pe": float(p.rho[2, 2].real),
            "re_rho01": float(p.rho[0, 1].real),
            "im_rho01": float(p.rho[0, 1].imag),
        }
        for p in points
    ]
    return pd.DataFrame(rows, columns=TRAJECTORY_COLUMNS)


def sweep_frame(results: Iterable) -> pd.DataFrame:
    """Concatenate the rows of several SweepResults"""
    rows = [row for result in results for row in result.rows()]
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)


def write_csv(frame: pd.DataFrame, path: PathLike) -> Path:
    path = _prepare(path)
    frame.to_csv(path, index=False)
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def _plain(value):
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    if hasattr(value, "model_dump"):
        return _plain(value.model_dump(mode="json"))
    return value


def write_json(payload, path: PathLike) -> Path:
    path = _prepare(path)
    path.write_text(json.dumps(_plain(payload), indent=2))
    logger.info(f"Wrote {path}")
    return path


def write_jsonl(records: Iterable[Dict], path: PathLike) -> Path:
    path = _prepare(path)
    with path.open("w") as handle:
        for record in records:
            handle.write(json.dumps(_plain(record)) + "\n")
    logger.info(f"Wrote {path}")
    return path


def gate_record(
    label: str,
    gate: GateSpec,
    duration_T: float,
    fidelity: float,
    leakage: float,
    noise_enabled: bool,
    unitary: Optional[np.ndarray] = None,
) -> Dict:
    """Extracted-gate export; unitary fields are null for noisy runs"""
    return {
        "gate": label,
        "theta": gate.theta,
        "phi": gate.phi_rel,
        "gamma": gate.gamma,
        "duration_t_s": duration_T,
        "fidelity": round(float(fidelity), 12),
        "leakage": float(leakage),
        "noise_enabled": noise_enabled,
        "unitary_re": None if unitary is None else np.real(unitary).tolist(),
        "unitary_im": None if unitary is None else np.imag(unitary).tolist(),
    }


def chi_record(entries: np.ndarray, fidelity: float, label: str) -> Dict:
    return {
        "basis": list(PAULI_LABELS),
        "re": np.real(entries).tolist(),
        "im": np.imag(entries).tolist(),
        "fidelity": float(fidelity),
        "gate": label,
    }


def read_jsonl(path: PathLike) -> List[Dict]:
    with Path(path).open() as handle:
        return [json.loads(line) for line in handle if line.strip()]
