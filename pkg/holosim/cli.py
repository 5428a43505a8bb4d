"""
Command-line interface for HoloSim

Each subcommand reproduces one family of results and writes its artifacts into the output
directory. Exit codes: 0 success, 2 configuration or I/O error, 3 numerical failure.
"""
from pathlib import Path
from typing import Callable, Dict, List, Optional

import argparse
import logging
import math
import sys
import numpy as np

from holosim.bench.calibration import calibrate_duration, gate_process_fidelity
from holosim.bench.optimizer import optimize_schedule
from holosim.bench.parameter_sweep import initial_qubit_state, sweep_gate_parameter
from holosim.bench.run_setup import noise_model, resolve_gate
from holosim.bench.schemes import SchemeName, build_schedule, kind_for
from holosim.bench.sweep import sweep_alpha
from holosim.config import RunConfig, build_run_config, config, load_config
from holosim.control.schedule import NO_ERROR, StaSchedule
from holosim.core.linalg import average_gate_fidelity, projector
from holosim.exceptions import ConfigError, GateNotFoundError, HoloSimError
from holosim.gates.holonomy import drive_spec_for, extract_qubit_gate, holonomy_matrix, named_gate
from holosim.gates.phases import phase_report
from holosim.propagation.evolve import evolve_lindblad, evolve_unitary
from holosim.utils import exporters

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

TRAJECTORY_SAMPLES = 200

DEFAULT_SWEEP_VALUES = {
    "theta": np.linspace(0.0, math.pi, 21),
    "phi": np.linspace(0.0, 2 * math.pi, 24, endpoint=False),
    "gamma": np.linspace(0.0, 2 * math.pi, 24, endpoint=False),
}


def _output(cfg: RunConfig, name: str) -> Path:
    return Path(cfg.output_dir) / name


def simulate_gate(cfg: RunConfig) -> Dict:
    """Trajectory CSV and extracted-gate JSON for one gate"""
    label, target = resolve_gate(cfg)
    noise = noise_model(cfg)
    schedule = build_schedule(cfg.scheme, target, cfg.duration_T, cfg.omega_a)
    kind = kind_for(schedule)
    ideal = holonomy_matrix(target)
    psi3 = np.append(initial_qubit_state(cfg.initial_state), 0.0)
    record_every = max(1, cfg.n_steps // TRAJECTORY_SAMPLES)

    if noise.enabled:
        result = evolve_lindblad(schedule, kind, NO_ERROR, noise, projector(psi3), cfg.n_steps, record_every)
        fidelity, chi = gate_process_fidelity(schedule, target, noise, n_steps=cfg.n_steps,
                                              preparation=cfg.preparation)
        record = exporters.gate_record(label, target, cfg.duration_T, fidelity, 1.0 - chi.trace, True)
    else:
        result = evolve_unitary(schedule, kind, NO_ERROR, cfg.n_steps, psi3, record_every)
        extracted = extract_qubit_gate(result.final_unitary, reference=ideal)
        fidelity = average_gate_fidelity(extracted.qubit_unitary, ideal)
        record = exporters.gate_record(label, target, cfg.duration_T, fidelity, extracted.leakage, False,
                                       extracted.qubit_unitary)

    exporters.write_csv(exporters.trajectory_frame(result.trajectory), _output(cfg, "trajectory.csv"))
    exporters.write_json(record, _output(cfg, "gate.json"))
    logger.info(f"Gate {label}: fidelity {fidelity:.6f}, leakage {record['leakage']:.2e}")
    return record


def _tomography_duration(cfg: RunConfig) -> float:
    if cfg.duration_t_s is not None or not (cfg.noise_enabled and cfg.calibrate_duration):
        return cfg.duration_T
    return calibrate_duration(named_gate("X"), noise=noise_model(cfg), omega_a=cfg.omega_a)


def tomography(cfg: RunConfig) -> Dict:
    """χ JSON of the simulated gate; T is calibrated on X when noise is on and no duration is set"""
    label, target = resolve_gate(cfg)
    duration_T = _tomography_duration(cfg)
    schedule = build_schedule(cfg.scheme, target, duration_T, cfg.omega_a)
    fidelity, chi = gate_process_fidelity(schedule, target, noise_model(cfg), n_steps=cfg.n_steps,
                                          preparation=cfg.preparation)
    record = exporters.chi_record(chi.entries, fidelity, label)
    exporters.write_json(record, _output(cfg, "chi.json"))
    logger.info(f"Process fidelity of {label} at T={duration_T * 1e6:.4f} us: {fidelity:.4f}")
    return record


def sweep_error(cfg: RunConfig) -> List:
    """Sweep CSV for StaBaseline and Nhqc, plus StaOptimized when that scheme is selected"""
    label, target = resolve_gate(cfg)
    noise = noise_model(cfg)
    schemes = [(SchemeName.STA_BASELINE, ()), (SchemeName.NHQC, ())]
    if cfg.scheme == SchemeName.STA_OPTIMIZED.value:
        outcome = optimize_schedule(target, cfg.alphas, cfg.family_dim, cfg.budget, cfg.seed,
                                    cfg.duration_T, cfg.omega_a, cfg.alpha_mode)
        schemes.append((SchemeName.STA_OPTIMIZED, tuple(outcome.params)))

    results = [
        sweep_alpha(scheme, target, cfg.alphas, noise, cfg.duration_T, cfg.omega_a, coefficients,
                    cfg.alpha_mode, cfg.n_steps, gate_label=label)
        for scheme, coefficients in schemes
    ]
    exporters.write_csv(exporters.sweep_frame(results), _output(cfg, "sweep.csv"))
    failed = sum(len(r.errors) for r in results)
    if failed:
        logger.warning(f"{failed} sweep point(s) failed; see the log above")
    return results


def optimize(cfg: RunConfig) -> Dict:
    """Optimization log (JSON lines) and the final schedule"""
    label, target = resolve_gate(cfg)
    outcome = optimize_schedule(target, cfg.alphas, cfg.family_dim, cfg.budget, cfg.seed,
                                cfg.duration_T, cfg.omega_a, cfg.alpha_mode)
    exporters.write_jsonl(outcome.history, _output(cfg, "optimization.jsonl"))
    final = {
        "gate": label,
        "theta": target.theta,
        "phi": target.phi_rel,
        "gamma": target.gamma,
        "omega_a_hz": cfg.omega_a_hz,
        "duration_t_s": cfg.duration_T,
        "alpha_mode": cfg.alpha_mode,
        "shape_coefficients": outcome.params,
        "objective_before": outcome.objective_before,
        "objective_after": outcome.objective_after,
        "evaluations": outcome.evaluations,
        "seed": cfg.seed,
    }
    exporters.write_json(final, _output(cfg, "optimized_schedule.json"))
    return final


def export_pulses(cfg: RunConfig):
    label, target = resolve_gate(cfg)
    schedule = build_schedule(cfg.scheme, target, cfg.duration_T, cfg.omega_a)
    frame = exporters.pulses_frame(schedule)
    exporters.write_csv(frame, _output(cfg, "pulses.csv"))
    return frame


def phases(cfg: RunConfig) -> Dict:
    label, target = resolve_gate(cfg)
    schedule = StaSchedule.for_gate(drive_spec_for(target), cfg.omega_a, cfg.duration_T)
    report = phase_report(schedule, cfg.n_steps)
    payload = {"gate": label, **report.model_dump()}
    exporters.write_json(payload, _output(cfg, "phases.json"))
    logger.info(f"Phases of {label}: {report}")
    return payload


def sweep_params(cfg: RunConfig):
    """Final-state sweep over θ, φ or γ"""
    _, base = resolve_gate(cfg)
    values = cfg.sweep_values if cfg.sweep_values is not None else DEFAULT_SWEEP_VALUES[cfg.sweep_parameter]
    frame = sweep_gate_parameter(cfg.sweep_parameter, values, base, cfg.initial_state, noise_model(cfg),
                                 cfg.duration_T, cfg.omega_a, cfg.n_steps)
    exporters.write_csv(frame, _output(cfg, "params.csv"))
    return frame


COMMANDS: Dict[str, Callable[[RunConfig], object]] = {
    "simulate-gate": simulate_gate,
    "tomography": tomography,
    "sweep-error": sweep_error,
    "optimize": optimize,
    "export-pulses": export_pulses,
    "phases": phases,
    "sweep-params": sweep_params,
}

# flag destination -> RunConfig key
_FLAG_KEYS = {
    "gate": "gate",
    "theta": "theta",
    "phi": "phi",
    "gamma": "gamma",
    "omega_a_hz": "omega_a_hz",
    "duration": "duration_t_s",
    "n_steps": "n_steps",
    "noise": "noise_enabled",
    "t1_e": "t1_e_s",
    "t1_f": "t1_f_s",
    "t2_ge": "t2_ge_s",
    "t2_ef": "t2_ef_s",
    "scheme": "scheme",
    "alphas": "alphas",
    "alpha_mode": "alpha_mode",
    "family_dim": "family_dim",
    "budget": "budget",
    "seed": "seed",
    "output_dir": "output_dir",
    "initial_state": "initial_state",
    "calibrate": "calibrate_duration",
    "preparation": "preparation",
    "parameter": "sweep_parameter",
    "values": "sweep_values",
}


def _float_list(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--gate", help="Named gate: I, Z, X, H, Xhalf")
    common.add_argument("--theta", type=float)
    common.add_argument("--phi", type=float)
    common.add_argument("--gamma", type=float)
    common.add_argument("--omega-a-hz", type=float, help="Peak Rabi frequency Ωₐ/2π in Hz")
    common.add_argument("--duration", type=float, help="Gate duration T in seconds")
    common.add_argument("--n-steps", type=int)
    common.add_argument("--noise", dest="noise", action="store_true", default=None)
    common.add_argument("--no-noise", dest="noise", action="store_false", default=None)
    common.add_argument("--t1-e", type=float)
    common.add_argument("--t1-f", type=float)
    common.add_argument("--t2-ge", type=float)
    common.add_argument("--t2-ef", type=float)
    common.add_argument("--scheme", choices=[s.value for s in SchemeName])
    common.add_argument("--output-dir")
    common.add_argument("--initial-state", choices=["0", "1", "+", "+i"])
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="holosim", description="STA holonomic gate simulator")
    subparsers = parser.add_subparsers(dest="command", required=True)
    subs = {name: subparsers.add_parser(name, parents=[common]) for name in COMMANDS}

    for name in ("sweep-error", "optimize"):
        subs[name].add_argument("--alphas", type=_float_list, help="Comma-separated α values")
        subs[name].add_argument("--alpha-mode", choices=["total", "bare"])
        subs[name].add_argument("--budget", type=int)
        subs[name].add_argument("--family-dim", type=int)
        subs[name].add_argument("--seed", type=int)
    for name in ("simulate-gate", "tomography"):
        subs[name].add_argument("--preparation", choices=["exact", "gates"])
    subs["tomography"].add_argument("--no-calibrate", dest="calibrate", action="store_false", default=None)
    subs["sweep-params"].add_argument("--parameter", choices=["theta", "phi", "gamma"])
    subs["sweep-params"].add_argument("--values", type=_float_list)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Config file values overridden by explicitly given flags"""
    values = load_config(args.config).model_dump(exclude_unset=True) if args.config else {}
    for dest, key in _FLAG_KEYS.items():
        value = getattr(args, dest, None)
        if value is not None:
            values[key] = value
    return build_run_config(values)


def run_command(argv: Optional[List[str]] = None) -> int:
    """
    Parse ``argv``, run the subcommand and return the exit code

    Args:
        argv: Arguments without the program name; sys.argv[1:] when omitted

    Returns:
        0 on success, 2 on configuration/I-O errors, 3 on numerical failures
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_CONFIG

    logging.basicConfig(level=logging.DEBUG if args.verbose else config.LOG_LEVEL)
    try:
        cfg = config_from_args(args)
        logger.info(f"Running {args.command}")
        COMMANDS[args.command](cfg)
    except (ConfigError, GateNotFoundError, OSError) as e:
        print(f"holosim: error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (HoloSimError, np.linalg.LinAlgError) as e:
        print(f"holosim: numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
