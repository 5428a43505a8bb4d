"""
Time-domain control protocols for holonomic gates

Both schedules split the gate into two halves of duration T/2. Each half is described in its own
local time τ ∈ [0, T/2]; the second half repeats the first-half profile with the b–e coupling
sign-reversed (spin echo) and the drive phase switched from γ₁ to γ₂.
"""
from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Dict, NamedTuple, Optional, Tuple, Union

import logging
import math
import numpy as np

from holosim.config import DEFAULT_DURATION_T_S, DEFAULT_OMEGA_A_HZ
from holosim.exceptions import InvalidInputError, OutOfRangeError

logger = logging.getLogger(__name__)

DEFAULT_OMEGA_A = 2 * math.pi * DEFAULT_OMEGA_A_HZ

# Σ k|c_k| bound keeping the shaped mixing profile monotone (so Ω ≥ 0)
MAX_SHAPE_WEIGHT = 0.24
MAX_SHAPE_TERMS = 8

NHQC_PHASE_OFFSET = math.pi


class Segment(str, Enum):
    FIRST_HALF = "FirstHalf"
    SECOND_HALF = "SecondHalf"


@dataclass(frozen=True)
class GateSpec:
    """Holonomy parameters: rotation by ``gamma`` about n(theta, phi_rel)"""
    theta: float
    phi_rel: float
    gamma: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise InvalidInputError(f"theta={self.theta} outside [0, π]")
        if not 0.0 <= self.phi_rel < 2 * math.pi:
            raise InvalidInputError(f"phi_rel={self.phi_rel} outside [0, 2π)")
        if not -2 * math.pi < self.gamma < 2 * math.pi:
            raise InvalidInputError(f"gamma={self.gamma} outside (-2π, 2π)")

    @property
    def axis(self) -> np.ndarray:
        return np.array([
            math.sin(self.theta) * math.cos(self.phi_rel),
            math.sin(self.theta) * math.sin(self.phi_rel),
            math.cos(self.theta),
        ])


@dataclass(frozen=True)
class ErrorModel:
    """Multiplicative Rabi-amplitude error Ω → (1+α)Ω"""
    alpha_rabi: float = 0.0
    scale_counterdiabatic: bool = True

    def __post_init__(self):
        if not abs(self.alpha_rabi) < 1.0:
            raise InvalidInputError(f"|alpha_rabi|={abs(self.alpha_rabi)} must be < 1")

    @property
    def amplitude_scale(self) -> float:
        return 1.0 + self.alpha_rabi

    @property
    def counterdiabatic_scale(self) -> float:
        return self.amplitude_scale if self.scale_counterdiabatic else 1.0


NO_ERROR = ErrorModel()


@dataclass(frozen=True)
class DriveSample:
    t: float
    omega: float
    delta: float
    phi1: float
    mixing_rate: float
    segment: Segment
    echo_sign: Optional[float] = None

    def __post_init__(self):
        if self.omega < 0:
            raise InvalidInputError(f"Drive amplitude must be non-negative, got {self.omega}")
        if self.echo_sign is None:
            # sign-reversed coupling on the second half unless the schedule says otherwise
            object.__setattr__(self, "echo_sign", _echo(self.segment))

    @property
    def signed_omega(self) -> float:
        return self.echo_sign * self.omega


@dataclass(frozen=True)
class DriveTable:
    """Vectorized drive samples, one entry per time point"""
    t: np.ndarray
    omega: np.ndarray
    delta: np.ndarray
    phi1: np.ndarray
    mixing_rate: np.ndarray
    echo_sign: np.ndarray
    second_half: np.ndarray

    def __len__(self) -> int:
        return len(self.t)

    def columns(self) -> Tuple[np.ndarray, ...]:
        return tuple(getattr(self, f.name) for f in fields(self))

    def sample(self, i: int) -> DriveSample:
        segment = Segment.SECOND_HALF if self.second_half[i] else Segment.FIRST_HALF
        return DriveSample(
            t=float(self.t[i]),
            omega=float(self.omega[i]),
            delta=float(self.delta[i]),
            phi1=float(self.phi1[i]),
            mixing_rate=float(self.mixing_rate[i]),
            segment=segment,
            echo_sign=float(self.echo_sign[i]),
        )

    @classmethod
    def concatenate(cls, first: "DriveTable", second: "DriveTable") -> "DriveTable":
        return cls(*(np.concatenate([a, b]) for a, b in zip(first.columns(), second.columns())))


class ToneParams(NamedTuple):
    omega0: float
    omega1: float
    phi0: float
    phi1: float


def _echo(segment: Segment) -> float:
    return 1.0 if segment is Segment.FIRST_HALF else -1.0


class TwoSegmentSchedule:
    """Shared time bookkeeping for schedules made of two halves"""

    gate: GateSpec
    duration_T: float

    @property
    def half(self) -> float:
        return 0.5 * self.duration_T

    def _check_time(self, t: Union[float, np.ndarray]) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        slack = 1e-12 * self.duration_T
        if np.any(t < -slack) or np.any(t > self.duration_T + slack):
            raise OutOfRangeError(f"t outside [0, {self.duration_T:.3e}] s")
        return np.clip(t, 0.0, self.duration_T)

    def segment_table(self, segment: Segment, tau: np.ndarray, err: ErrorModel) -> DriveTable:
        raise NotImplementedError

    def drive_table(self, times, err: ErrorModel = NO_ERROR) -> DriveTable:
        """Drive samples at arbitrary times in [0, T]; t = T/2 belongs to the first half"""
        t = self._check_time(times)
        first = t <= self.half
        table_a = self.segment_table(Segment.FIRST_HALF, t[first], err)
        table_b = self.segment_table(Segment.SECOND_HALF, t[~first] - self.half, err)
        merged = DriveTable.concatenate(table_a, table_b)
        order = np.argsort(np.concatenate([np.flatnonzero(first), np.flatnonzero(~first)]), kind="stable")
        return DriveTable(*(column[order] for column in merged.columns()))

    def drive_at(self, t: float, err: ErrorModel = NO_ERROR) -> DriveSample:
        return self.drive_table([t], err).sample(0)

    def tone_table(self, times, err: ErrorModel = NO_ERROR) -> Dict[str, np.ndarray]:
        """Physical tone amplitudes and phases; the echo sign shows up as a π phase jump"""
        d = self.drive_table(times, err)
        omega_eff = 2.0 * np.hypot(0.5 * d.omega, d.mixing_rate)
        common = d.phi1 + np.arctan2(2.0 * d.mixing_rate, d.omega) + np.where(d.echo_sign < 0, math.pi, 0.0)
        half_theta = 0.5 * self.gate.theta
        return {
            "omega0": omega_eff * math.sin(half_theta),
            "omega1": omega_eff * math.cos(half_theta),
            "phi0": common + self.gate.phi_rel,
            "phi1": common,
        }


@dataclass(frozen=True)
class StaSchedule(TwoSegmentSchedule):
    """
    Shortcut-to-adiabaticity schedule

    Per half the local mixing profile is φ(τ) = πτ/T + Σ c_k sin(4πkτ/T), giving
    Ω = Ωₐ sin 2φ, Δ = Ωₐ cos 2φ and the counterdiabatic rate dφ/dτ. With no coefficients this is
    the sinusoidal schedule Ω = Ωₐ|sin(2πt/T)|, Δ = ±Ωₐ cos(2πt/T).
    """
    gate: GateSpec
    omega_a: float = DEFAULT_OMEGA_A
    duration_T: float = DEFAULT_DURATION_T_S
    gamma1: float = 0.0
    gamma2: float = 0.0
    shape_coefficients: Tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.omega_a <= 0:
            raise InvalidInputError(f"omega_a must be positive, got {self.omega_a}")
        if self.duration_T <= 0:
            raise InvalidInputError(f"duration_T must be positive, got {self.duration_T}")
        if abs((self.gamma1 - self.gamma2) - self.gate.gamma) > 1e-12:
            raise InvalidInputError(
                f"gamma1 - gamma2 = {self.gamma1 - self.gamma2} does not match gate gamma {self.gate.gamma}"
            )
        object.__setattr__(self, "shape_coefficients", tuple(float(c) for c in self.shape_coefficients))
        if len(self.shape_coefficients) > MAX_SHAPE_TERMS:
            raise InvalidInputError(f"At most {MAX_SHAPE_TERMS} shape coefficients are supported")
        if not shape_feasible(self.shape_coefficients):
            raise InvalidInputError(
                f"Shape coefficients violate Σ k|c_k| ≤ {MAX_SHAPE_WEIGHT}: {self.shape_coefficients}"
            )

    @classmethod
    def for_gate(cls, gate: GateSpec, omega_a: float = DEFAULT_OMEGA_A,
                 duration_T: float = DEFAULT_DURATION_T_S,
                 shape_coefficients: Tuple[float, ...] = ()) -> "StaSchedule":
        """Schedule with gamma2 = 0 and gamma1 = gate.gamma"""
        return cls(gate=gate, omega_a=omega_a, duration_T=duration_T,
                   gamma1=gate.gamma, gamma2=0.0, shape_coefficients=shape_coefficients)

    def with_shape(self, coefficients) -> "StaSchedule":
        return StaSchedule(self.gate, self.omega_a, self.duration_T, self.gamma1, self.gamma2,
                           tuple(coefficients))

    def local_mixing(self, tau: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Local mixing profile φ(τ) and its rate dφ/dτ on one half"""
        tau = np.asarray(tau, dtype=float)
        T = self.duration_T
        phi = math.pi * tau / T
        rate = np.full_like(tau, math.pi / T)
        for k, c in enumerate(self.shape_coefficients, start=1):
            if c == 0.0:
                continue
            arg = 4 * math.pi * k * tau / T
            phi = phi + c * np.sin(arg)
            rate = rate + c * (4 * math.pi * k / T) * np.cos(arg)
        return phi, rate

    def segment_table(self, segment: Segment, tau: np.ndarray, err: ErrorModel) -> DriveTable:
        tau = np.asarray(tau, dtype=float)
        phi, rate = self.local_mixing(tau)
        omega = self.omega_a * np.sin(2 * phi)
        # φ is pinned to 0 and π/2 at the half boundaries
        omega[(tau <= 0.0) | (tau >= self.half)] = 0.0
        omega = err.amplitude_scale * np.maximum(omega, 0.0)
        delta = self.omega_a * np.cos(2 * phi)
        gamma = self.gamma1 if segment is Segment.FIRST_HALF else self.gamma2
        t = tau if segment is Segment.FIRST_HALF else tau + self.half
        return DriveTable(
            t=t,
            omega=omega,
            delta=delta,
            phi1=np.full_like(tau, gamma),
            mixing_rate=err.counterdiabatic_scale * rate,
            echo_sign=np.full_like(tau, _echo(segment)),
            second_half=np.full(tau.shape, segment is Segment.SECOND_HALF),
        )

    def mixing_angle_at(self, t: float) -> float:
        """
        Branch-continuous mixing angle

        Rises from 0 to π/2 on the first half and returns to 0 on the second, following the
        eigenstate that carries |b> → |e> → |b>.
        """
        t = float(self._check_time(t)[0])
        if t <= self.half:
            phi, _ = self.local_mixing(np.array([t]))
            return float(phi[0])
        phi, _ = self.local_mixing(np.array([t - self.half]))
        return float(math.pi / 2 - phi[0])

    def raw_tone_params(self, t: float, err: ErrorModel = NO_ERROR) -> ToneParams:
        """
        Split the folded H₀ + H_a coupling into the two physical tones

        Args:
            t: Time in [0, T]
            err: Control-error model

        Returns:
            ToneParams(omega0, omega1, phi0, phi1) for the |0>↔|e> and |1>↔|e> tones
        """
        tones = self.tone_table([t], err)
        return ToneParams(*(float(tones[name][0]) for name in ToneParams._fields))


@dataclass(frozen=True)
class NhqcSchedule(TwoSegmentSchedule):
    """
    Resonant two-pulse holonomic baseline

    Each half is a sin²-shaped π pulse; the second pulse carries phase γ₂ + ``phase_offset``.
    ``omega_a`` is kept for interface parity with StaSchedule: the pulse area fixes the amplitude.
    """
    gate: GateSpec
    omega_a: float = DEFAULT_OMEGA_A
    duration_T: float = DEFAULT_DURATION_T_S
    gamma1: float = 0.0
    gamma2: float = 0.0
    phase_offset: float = NHQC_PHASE_OFFSET

    def __post_init__(self):
        if self.duration_T <= 0:
            raise InvalidInputError(f"duration_T must be positive, got {self.duration_T}")
        if abs((self.gamma1 - self.gamma2) - self.gate.gamma) > 1e-12:
            raise InvalidInputError(
                f"gamma1 - gamma2 = {self.gamma1 - self.gamma2} does not match gate gamma {self.gate.gamma}"
            )

    @classmethod
    def for_gate(cls, gate: GateSpec, omega_a: float = DEFAULT_OMEGA_A,
                 duration_T: float = DEFAULT_DURATION_T_S,
                 phase_offset: float = NHQC_PHASE_OFFSET) -> "NhqcSchedule":
        return cls(gate=gate, omega_a=omega_a, duration_T=duration_T,
                   gamma1=gate.gamma, gamma2=0.0, phase_offset=phase_offset)

    def envelope(self, tau: np.ndarray) -> np.ndarray:
        """sin² envelope with area π on each half"""
        tau = np.asarray(tau, dtype=float)
        T = self.duration_T
        return (4 * math.pi / T) * np.sin(2 * math.pi * tau / T) ** 2

    def segment_table(self, segment: Segment, tau: np.ndarray, err: ErrorModel) -> DriveTable:
        tau = np.asarray(tau, dtype=float)
        phase = self.gamma1 if segment is Segment.FIRST_HALF else self.gamma2 + self.phase_offset
        return DriveTable(
            t=tau if segment is Segment.FIRST_HALF else tau + self.half,
            omega=err.amplitude_scale * self.envelope(tau),
            delta=np.zeros_like(tau),
            phi1=np.full_like(tau, phase),
            mixing_rate=np.zeros_like(tau),
            # the π offset on the second pulse replaces the sign reversal
            echo_sign=np.ones_like(tau),
            second_half=np.full(tau.shape, segment is Segment.SECOND_HALF),
        )


@dataclass(frozen=True)
class ConstantDrive(TwoSegmentSchedule):
    """Frozen drive parameters over [0, T]; used for time-independent and undriven runs"""
    gate: GateSpec
    duration_T: float
    omega: float = 0.0
    delta: float = 0.0
    phi1: float = 0.0
    mixing_rate: float = 0.0

    def __post_init__(self):
        if self.duration_T <= 0 or self.omega < 0:
            raise InvalidInputError("ConstantDrive needs duration_T > 0 and omega >= 0")

    def segment_table(self, segment: Segment, tau: np.ndarray, err: ErrorModel) -> DriveTable:
        tau = np.asarray(tau, dtype=float)
        ones = np.ones_like(tau)
        return DriveTable(
            t=tau if segment is Segment.FIRST_HALF else tau + self.half,
            omega=err.amplitude_scale * self.omega * ones,
            delta=self.delta * ones,
            phi1=self.phi1 * ones,
            mixing_rate=err.counterdiabatic_scale * self.mixing_rate * ones,
            echo_sign=ones,
            second_half=np.full(tau.shape, segment is Segment.SECOND_HALF),
        )


Schedule = Union[StaSchedule, NhqcSchedule, ConstantDrive]


def shape_feasible(coefficients) -> bool:
    weight = sum(k * abs(c) for k, c in enumerate(coefficients, start=1))
    return weight <= MAX_SHAPE_WEIGHT + 1e-12


def drive_at(schedule: StaSchedule, t: float, err: ErrorModel = NO_ERROR) -> DriveSample:
    return schedule.drive_at(t, err)


def nhqc_drive_at(schedule: NhqcSchedule, t: float, err: ErrorModel = NO_ERROR) -> DriveSample:
    if not isinstance(schedule, NhqcSchedule):
        raise InvalidInputError("nhqc_drive_at expects an NhqcSchedule")
    return schedule.drive_at(t, err)


def mixing_angle_at(schedule: StaSchedule, t: float) -> float:
    return schedule.mixing_angle_at(t)


def raw_tone_params(schedule: StaSchedule, t: float, err: ErrorModel = NO_ERROR) -> ToneParams:
    return schedule.raw_tone_params(t, err)
