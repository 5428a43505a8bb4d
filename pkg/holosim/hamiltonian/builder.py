"""
Rotating-frame three-level Hamiltonians and their instantaneous eigenframes
"""
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import logging
import math
import numpy as np

from holosim.control.schedule import DriveSample, DriveTable, GateSpec
from holosim.core.linalg import KET_E

logger = logging.getLogger(__name__)

DEGENERACY_TOL = 1e-9  # rad/s


class HamiltonianKind(str, Enum):
    BARE = "Bare"
    STA = "Sta"


@dataclass(frozen=True)
class EigenFrame:
    """Eigenframe of H₀: dark state (eigenvalue 0) plus the two bright/excited branches"""
    dark: np.ndarray
    e_minus: np.ndarray
    eigenvalue_minus: float
    e_plus: np.ndarray
    eigenvalue_plus: float
    degenerate: bool = False

    def as_matrix(self) -> np.ndarray:
        return np.column_stack([self.dark, self.e_minus, self.e_plus])


def bright_dark_pair(g: GateSpec) -> Tuple[np.ndarray, np.ndarray]:
    """
    Bright and dark superpositions of the qubit levels

    Args:
        g: Gate parameters (theta, phi_rel)

    Returns:
        (bright, dark) as 3-component vectors with zero |e> amplitude
    """
    s, c = math.sin(0.5 * g.theta), math.cos(0.5 * g.theta)
    phase = np.exp(1j * g.phi_rel)
    bright = np.array([s * phase, c, 0.0], dtype=complex)
    dark = np.array([c * phase, -s, 0.0], dtype=complex)
    return bright, dark


def _coupling(kind: HamiltonianKind, omega, mixing_rate, phi1, echo_sign):
    """<b|H|e> for scalars or arrays"""
    amplitude = 0.5 * np.asarray(omega, dtype=complex)
    if kind is HamiltonianKind.STA:
        amplitude = amplitude + 1j * np.asarray(mixing_rate)
    return np.asarray(echo_sign) * np.exp(1j * np.asarray(phi1)) * amplitude


def hamiltonian_at(kind: HamiltonianKind, g: GateSpec, d: DriveSample) -> np.ndarray:
    """H₀ (Bare) or H₀ + H_a (Sta) at one drive sample"""
    bright, _ = bright_dark_pair(g)
    c = complex(_coupling(kind, d.omega, d.mixing_rate, d.phi1, d.echo_sign))
    b_e = np.outer(bright, KET_E)
    h = c * b_e + np.conj(c) * b_e.conj().T
    h[2, 2] += d.delta
    return h


def hamiltonian_stack(kind: HamiltonianKind, g: GateSpec, table: DriveTable) -> np.ndarray:
    """Hamiltonians for every row of a drive table, shape (n, 3, 3)"""
    bright, _ = bright_dark_pair(g)
    c = _coupling(kind, table.omega, table.mixing_rate, table.phi1, table.echo_sign)
    n = len(table)
    h = np.zeros((n, 3, 3), dtype=complex)
    h[:, :2, 2] = c[:, None] * bright[None, :2]
    h[:, 2, :2] = np.conj(h[:, :2, 2])
    h[:, 2, 2] = table.delta
    return h


def eigensystem_at(g: GateSpec, d: DriveSample) -> EigenFrame:
    """
    Closed-form eigenframe of H₀

    In the {|b>, ẽ = e^{-iφ₁}|e>} basis H₀ is real: [[0, s·Ω/2], [s·Ω/2, Δ]] with s the echo sign.
    With 2φ = atan2(sΩ, Δ) the branches are cosφ|b> - sinφ ẽ (eigenvalue (Δ-R)/2) and
    sinφ|b> + cosφ ẽ (eigenvalue (Δ+R)/2), R = sqrt(Δ² + Ω²). Each branch is returned with a real,
    non-negative |b> component.
    """
    bright, dark = bright_dark_pair(g)
    e_tilde = np.exp(-1j * d.phi1) * KET_E
    radius = math.hypot(d.delta, d.omega)
    if radius < DEGENERACY_TOL:
        logger.debug(f"Degenerate eigenframe at t={d.t:.3e}")
        return EigenFrame(dark=dark, e_minus=bright, eigenvalue_minus=0.0,
                          e_plus=e_tilde, eigenvalue_plus=0.0, degenerate=True)

    half_angle = 0.5 * math.atan2(d.echo_sign * d.omega, d.delta)
    cos_a, sin_a = math.cos(half_angle), math.sin(half_angle)
    e_minus = cos_a * bright - sin_a * e_tilde
    e_plus = sin_a * bright + cos_a * e_tilde
    if sin_a < 0:
        e_plus = -e_plus
    return EigenFrame(
        dark=dark,
        e_minus=e_minus,
        eigenvalue_minus=0.5 * (d.delta - radius),
        e_plus=e_plus,
        eigenvalue_plus=0.5 * (d.delta + radius),
    )
