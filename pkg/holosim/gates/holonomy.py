"""
Closed-form holonomies, the named gate table and gate extraction from simulated propagators

Two conventions meet here. ``holonomy_matrix`` is the normative gate U(θ, φ, γ) used as target.
A two-segment drive built on the bright state of GateSpec g realizes
``realized_holonomy(g) = |d><d| + e^{-iγ}|b><b|``. The two are related exactly (global phase
included) by ``realized_holonomy(drive_spec_for(g)) == holonomy_matrix(g)``, so schedules for a
target gate are always built from ``drive_spec_for(target)``.
"""
from dataclasses import dataclass
from typing import Dict, Optional

import logging
import math
import numpy as np
from scipy.linalg import polar

from holosim.control.schedule import GateSpec
from holosim.core.linalg import global_phase_align, is_unitary
from holosim.exceptions import GateNotFoundError, HighLeakageError, InvalidInputError
from holosim.hamiltonian.builder import bright_dark_pair

logger = logging.getLogger(__name__)

LEAKAGE_THRESHOLD = 1e-3

NAMED_GATES: Dict[str, GateSpec] = {
    "I": GateSpec(0.0, 0.0, 0.0),
    "Z": GateSpec(math.pi, 0.0, math.pi),
    "X": GateSpec(math.pi / 2, 0.0, math.pi),
    "H": GateSpec(math.pi / 4, 0.0, math.pi),
    "Xhalf": GateSpec(math.pi / 2, 0.0, math.pi / 2),
}


@dataclass(frozen=True)
class ExtractedGate:
    qubit_unitary: np.ndarray
    leakage: float
    global_phase_removed: bool


def named_gate(name: str) -> GateSpec:
    """Look up one of I, Z, X, H, Xhalf"""
    try:
        return NAMED_GATES[name]
    except KeyError:
        raise GateNotFoundError(f"Unknown gate '{name}'; known gates: {', '.join(NAMED_GATES)}") from None


def holonomy_matrix(g: GateSpec) -> np.ndarray:
    """
    Holonomy U(θ, φ, γ): rotation by γ about (sinθcosφ, -sinθsinφ, cosθ) with prefactor e^{iγ/2}

    Args:
        g: Gate parameters

    Returns:
        2x2 unitary with determinant e^{iγ}
    """
    c, s = math.cos(0.5 * g.gamma), math.sin(0.5 * g.gamma)
    ct, st = math.cos(g.theta), math.sin(g.theta)
    phase = np.exp(1j * g.phi_rel)
    m = np.array([
        [c - 1j * s * ct, -1j * s * st * phase],
        [-1j * s * st * np.conj(phase), c + 1j * s * ct],
    ], dtype=complex)
    return np.exp(0.5j * g.gamma) * m


def realized_holonomy(drive: GateSpec) -> np.ndarray:
    """Qubit gate produced by a cyclic two-segment drive on the bright state of ``drive``"""
    bright, dark = bright_dark_pair(drive)
    b, d = bright[:2], dark[:2]
    return np.outer(d, d.conj()) + np.exp(-1j * drive.gamma) * np.outer(b, b.conj())


def drive_spec_for(target: GateSpec) -> GateSpec:
    """Drive parameters whose realized holonomy equals holonomy_matrix(target)"""
    return GateSpec(
        theta=target.theta,
        phi_rel=math.fmod(target.phi_rel + math.pi, 2 * math.pi),
        gamma=-target.gamma,
    )


def extract_qubit_gate(u3: np.ndarray, reference: Optional[np.ndarray] = None) -> ExtractedGate:
    """
    Project a 3x3 propagator onto the qubit subspace

    Args:
        u3: Simulated 3x3 unitary
        reference: Optional 2x2 gate whose global phase the result is aligned to

    Returns:
        ExtractedGate with the polar-unitarized block

    Raises:
        HighLeakageError: when 1 - σ_min² of the block reaches the threshold
    """
    u3 = np.asarray(u3, dtype=complex)
    if u3.shape != (3, 3) or not is_unitary(u3, 1e-8):
        raise InvalidInputError("extract_qubit_gate expects a 3x3 unitary")
    block = u3[:2, :2]
    singular = np.linalg.svd(block, compute_uv=False)
    leakage = float(np.clip(1.0 - singular.min() ** 2, 0.0, 1.0))
    if leakage >= LEAKAGE_THRESHOLD:
        logger.warning(f"High leakage {leakage:.3e}; returning raw block")
        raise HighLeakageError(leakage, block.copy())
    unitary, _ = polar(block)
    if reference is not None:
        unitary = global_phase_align(unitary, reference)
    return ExtractedGate(qubit_unitary=unitary, leakage=leakage, global_phase_removed=reference is not None)
