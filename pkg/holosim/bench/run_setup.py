"""
Resolution of a RunConfig into the gate target and noise model shared by the CLI and the API
"""
from typing import Tuple

from holosim.config import RunConfig
from holosim.control.schedule import GateSpec
from holosim.gates.holonomy import named_gate
from holosim.propagation.noise import NoiseModel


def resolve_gate(cfg: RunConfig) -> Tuple[str, GateSpec]:
    """Explicit (theta, phi, gamma) wins over the gate name."""
    if cfg.theta is not None:
        return "custom", GateSpec(cfg.theta, cfg.phi, cfg.gamma)
    return cfg.gate, named_gate(cfg.gate)


def noise_model(cfg: RunConfig) -> NoiseModel:
    return NoiseModel(t1_e=cfg.t1_e_s, t1_f=cfg.t1_f_s, t2_ge=cfg.t2_ge_s, t2_ef=cfg.t2_ef_s,
                      enabled=cfg.noise_enabled)
