"""
Decoherence model of the transmon qutrit
"""
from dataclasses import dataclass
from typing import List

import logging
import numpy as np

from holosim.config import DEFAULT_T1_E_S, DEFAULT_T1_F_S, DEFAULT_T2_EF_S, DEFAULT_T2_GE_S
from holosim.exceptions import InvalidNoiseModelError

logger = logging.getLogger(__name__)

# basis indices
G, F, E = 0, 1, 2


@dataclass(frozen=True)
class NoiseModel:
    """
    Relaxation and dephasing times (seconds)

    Pure-dephasing rates: γ_φe = 1/T₂ᵍᵉ - 1/(2T₁ᵉ) must be non-negative;
    γ_φf = max(0, 1/T₂ᵉᶠ - 1/(2T₁ᶠ)) attributes the ef coherence loss to the f level alone.
    """
    t1_e: float = DEFAULT_T1_E_S
    t1_f: float = DEFAULT_T1_F_S
    t2_ge: float = DEFAULT_T2_GE_S
    t2_ef: float = DEFAULT_T2_EF_S
    enabled: bool = True

    def __post_init__(self):
        for name in ("t1_e", "t1_f", "t2_ge", "t2_ef"):
            value = getattr(self, name)
            if not value > 0:
                raise InvalidNoiseModelError(f"{name} must be positive, got {value}")
        if self.gamma_phi_e < 0:
            raise InvalidNoiseModelError(
                f"T2_ge={self.t2_ge:.3e} s exceeds 2*T1_e={2 * self.t1_e:.3e} s (negative pure dephasing)"
            )

    @classmethod
    def disabled(cls) -> "NoiseModel":
        return cls(enabled=False)

    @property
    def gamma_phi_e(self) -> float:
        return 1.0 / self.t2_ge - 1.0 / (2.0 * self.t1_e)

    @property
    def gamma_phi_f(self) -> float:
        return max(0.0, 1.0 / self.t2_ef - 1.0 / (2.0 * self.t1_f))


def dephasing_rates(noise: NoiseModel) -> dict:
    return {"gamma_phi_e": noise.gamma_phi_e, "gamma_phi_f": noise.gamma_phi_f}


def _transition(i: int, j: int) -> np.ndarray:
    op = np.zeros((3, 3), dtype=complex)
    op[i, j] = 1.0
    return op


def collapse_operators(noise: NoiseModel) -> List[np.ndarray]:
    """
    Collapse operators of the master equation

    Returns:
        [√(1/T₁ᵉ)|g><e|, √(1/T₁ᶠ)|e><f|, √(2γ_φe)|e><e|, √(2γ_φf)|f><f|], empty when disabled
    """
    if not noise.enabled:
        return []
    return [
        np.sqrt(1.0 / noise.t1_e) * _transition(G, E),
        np.sqrt(1.0 / noise.t1_f) * _transition(E, F),
        np.sqrt(2.0 * noise.gamma_phi_e) * _transition(E, E),
        np.sqrt(2.0 * noise.gamma_phi_f) * _transition(F, F),
    ]


def dissipator_superoperator(ops: List[np.ndarray], dim: int = 3) -> np.ndarray:
    """
    Lindblad dissipator acting on row-major vec(ρ)

    vec(AρB) = (A ⊗ Bᵀ) vec(ρ).
    """
    eye = np.eye(dim, dtype=complex)
    d = np.zeros((dim * dim, dim * dim), dtype=complex)
    for op in ops:
        rate_op = op.conj().T @ op
        d += np.kron(op, op.conj())
        d -= 0.5 * np.kron(rate_op, eye)
        d -= 0.5 * np.kron(eye, rate_op.T)
    return d
