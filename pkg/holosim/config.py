"""
Configuration management for HoloSim
Handles environment-specific settings and the run configuration schema
"""
import json
import math
import os
from pathlib import Path
from typing import List, Optional, Union

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from holosim.exceptions import ConfigError

load_dotenv()

class Config:
    """Base configuration class"""

    # Application settings
    APP_NAME = "HoloSim"
    VERSION = "1.0.0"
    DEBUG = False
    LOG_LEVEL = os.getenv("HOLOSIM_LOG_LEVEL", "INFO")

    # Numerics
    DEFAULT_N_STEPS = int(os.getenv("HOLOSIM_N_STEPS", "10000"))
    OPTIMIZER_N_STEPS = int(os.getenv("HOLOSIM_OPTIMIZER_N_STEPS", "2000"))
    MAX_WORKERS = int(os.getenv("HOLOSIM_MAX_WORKERS", "4"))

    # Output settings
    OUTPUT_DIR = os.getenv("HOLOSIM_OUTPUT_DIR", "outputs")

    # HTTP service
    API_HOST = os.getenv("HOLOSIM_API_HOST", "127.0.0.1")
    API_PORT = int(os.getenv("HOLOSIM_API_PORT", "8000"))

    @classmethod
    def is_development(cls) -> bool:
        """Check if running in development mode"""
        return os.getenv("DEVELOPMENT") == "true" or os.getenv("LOCAL_DEV") == "true"

class DevelopmentConfig(Config):
    """Development configuration"""
    DEBUG = True
    LOG_LEVEL = os.getenv("HOLOSIM_LOG_LEVEL", "DEBUG")

class ProductionConfig(Config):
    """Production configuration"""
    DEBUG = False

def get_config() -> Config:
    """Get configuration based on environment"""
    if Config.is_development():
        return DevelopmentConfig()
    return ProductionConfig()

# Global config instance
config = get_config()


# Device defaults (transmon qutrit used for the reference experiment)
DEFAULT_OMEGA_A_HZ = 2.0e6
DEFAULT_DURATION_T_S = 0.5e-6
DEFAULT_T1_E_S = 29e-6
DEFAULT_T1_F_S = 9e-6
DEFAULT_T2_GE_S = 5.9e-6
DEFAULT_T2_EF_S = 5.8e-6


class RunConfig(BaseModel):
    """Run configuration shared by every CLI subcommand"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    gate: Optional[str] = Field(default="X", description="Named gate (I, Z, X, H, Xhalf)")
    theta: Optional[float] = Field(default=None, ge=0.0, le=math.pi, description="Polar angle of the rotation axis")
    phi: Optional[float] = Field(default=None, ge=0.0, lt=2 * math.pi, description="Azimuth of the rotation axis")
    gamma: Optional[float] = Field(default=None, gt=-2 * math.pi, lt=2 * math.pi, description="Rotation angle")
    omega_a_hz: float = Field(default=DEFAULT_OMEGA_A_HZ, gt=0.0, description="Peak drive Rabi frequency in Hz")
    duration_t_s: Optional[float] = Field(default=None, gt=0.0, description="Gate duration in seconds")
    n_steps: int = Field(default=config.DEFAULT_N_STEPS, ge=100)
    noise_enabled: bool = True
    t1_e_s: float = Field(default=DEFAULT_T1_E_S, gt=0.0)
    t1_f_s: float = Field(default=DEFAULT_T1_F_S, gt=0.0)
    t2_ge_s: float = Field(default=DEFAULT_T2_GE_S, gt=0.0)
    t2_ef_s: float = Field(default=DEFAULT_T2_EF_S, gt=0.0)
    scheme: str = Field(default="StaBaseline", pattern="^(StaBaseline|Nhqc|StaOptimized)$")
    alphas: List[float] = Field(default_factory=lambda: [-0.1, -0.075, -0.05, -0.025, 0.0, 0.025, 0.05, 0.075, 0.1])
    alpha_mode: str = Field(default="total", pattern="^(total|bare)$")
    family_dim: int = Field(default=4, ge=1, le=8)
    budget: int = Field(default=500, ge=100)
    seed: int = 1234
    output_dir: str = Field(default=config.OUTPUT_DIR)
    initial_state: str = Field(default="0", pattern=r"^(0|1|\+|\+i)$")
    calibrate_duration: bool = True
    preparation: str = Field(default="exact", pattern="^(exact|gates)$")
    sweep_parameter: str = Field(default="theta", pattern="^(theta|phi|gamma)$")
    sweep_values: Optional[List[float]] = None

    @model_validator(mode="after")
    def _check_gate_selection(self) -> "RunConfig":
        triple = (self.theta, self.phi, self.gamma)
        if any(v is not None for v in triple) and any(v is None for v in triple):
            raise ValueError("theta, phi and gamma must be given together")
        if any(abs(a) >= 0.5 for a in self.alphas):
            raise ValueError("alphas must lie in (-0.5, 0.5)")
        return self

    @property
    def omega_a(self) -> float:
        """Peak Rabi frequency in rad/s"""
        return 2 * math.pi * self.omega_a_hz

    @property
    def duration_T(self) -> float:
        return self.duration_t_s if self.duration_t_s is not None else DEFAULT_DURATION_T_S


def _offending_keys(error: ValidationError) -> List[str]:
    keys = []
    for item in error.errors():
        loc = ".".join(str(part) for part in item.get("loc", ())) or "<root>"
        if loc not in keys:
            keys.append(loc)
    return keys


def build_run_config(values: dict) -> RunConfig:
    """Validate a mapping into a RunConfig, raising ConfigError naming the bad keys"""
    try:
        return RunConfig(**values)
    except ValidationError as e:
        keys = _offending_keys(e)
        raise ConfigError(f"Invalid configuration for key(s): {', '.join(keys)}", keys=keys) from e


def load_config(path: Union[str, Path]) -> RunConfig:
    """
    Load a JSON run configuration, filling defaults

    Args:
        path: Path to a JSON object with RunConfig keys

    Returns:
        Validated RunConfig
    """
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"Malformed JSON in {path}: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigError(f"Config file {path} must contain a JSON object")
    return build_run_config(raw)
