"""Nested polariton level structure of a driven dispersive qubit-cavity system.

A two-level (dressed) qubit driven near its zero- and one-photon transitions
hybridizes with a single cavity mode into four polariton levels, two per
photon-number block.  This module builds the rotating-frame block
Hamiltonians, the mixing angles, the four eigenstates with their engineered
decay rates, and the probe-relevant transition frequencies.

All frequencies and rates are angular (rad/s) unless a comment says otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DeviceParams",
    "PolaritonDrive",
    "MixingAngles",
    "PolaritonSystem",
    "TransitionCurves",
    "mixing_angles",
    "in_nesting_regime",
    "block_hamiltonians",
    "build_polaritons",
    "transition_curves",
    "eit_condition",
]


@dataclass(frozen=True)
class DeviceParams:
    """Static circuit parameters.

    ``omega_q`` is the bare qubit frequency; the measured zero-photon
    transition sits at ``omega_q - chi`` and the one-photon transition at
    ``omega_q - 3*chi``.  Use :meth:`from_zero_photon_transition` when the
    calibrated quantity is the zero-photon line itself.
    """

    omega_q: float  # bare qubit frequency, rad/s
    omega_r: float  # resonator frequency, rad/s
    chi: float      # dispersive shift, rad/s, > 0
    gamma_q: float  # qubit energy relaxation rate (1/T1), rad/s
    gamma_c: float  # cavity linewidth, rad/s
    line_length_l: float | None = None   # chip traversal distance, m
    coupling_g: float | None = None      # qubit-cavity coupling, metadata only
    anharmonicity: float | None = None   # transmon anharmonicity, metadata only

    def __post_init__(self):
        if not (self.chi > 0):
            raise ValueError(f"chi must be > 0, got {self.chi}")
        if self.gamma_q < 0 or self.gamma_c < 0:
            raise ValueError("decay rates must be >= 0")
        if self.line_length_l is not None and not (self.line_length_l > 0):
            raise ValueError(
                f"line_length_l must be > 0, got {self.line_length_l}"
            )
        detuning = abs(self.omega_r - self.omega_q)
        if detuning == 0 or self.chi / detuning >= 0.1:
            raise ValueError(
                "not in the dispersive regime: chi/|omega_r - omega_q| = "
                f"{self.chi / detuning if detuning else math.inf:.3g} >= 0.1"
            )

    @classmethod
    def from_zero_photon_transition(cls, omega_01, *, chi, **kwargs):
        """Build from the measured zero-photon qubit transition ``omega_01``."""
        return cls(omega_q=omega_01 + chi, chi=chi, **kwargs)


@dataclass(frozen=True)
class PolaritonDrive:
    """Coherent qubit drive: carrier frequency and Rabi strength."""

    omega_d: float  # drive frequency, rad/s
    rabi: float     # drive Rabi strength Omega_d, rad/s, >= 0

    def __post_init__(self):
        if self.rabi < 0:
            raise ValueError(f"drive rabi must be >= 0, got {self.rabi}")


@dataclass(frozen=True)
class MixingAngles:
    """Block mixing angles and the detunings they derive from."""

    theta0: float  # zero-photon block angle, rad, in [0, pi]
    theta1: float  # one-photon block angle, rad, in [0, pi]
    delta0: float  # (omega_q - chi) - omega_d, rad/s
    delta1: float  # omega_d - (omega_q - 3*chi), rad/s
    degenerate: bool = False  # Omega_d = 0 on top of a zero detuning


@dataclass(frozen=True)
class PolaritonSystem:
    """Four-level polariton structure at one drive setting.

    ``energies`` are the rotating-frame eigenvalues (E1, E2, E3, E4).
    ``amplitudes`` has one row per state: rows 0-1 are (|g,0>, |e,0>)
    components of states 1 and 2, rows 2-3 the (|g,1>, |e,1>) components of
    states 3 and 4.  Global phases are fixed by making the |g,n> component
    real and non-negative (the |e,n> component decides when it vanishes).
    """

    angles: MixingAngles
    energies: tuple[float, float, float, float]  # rad/s, rotating frame
    amplitudes: np.ndarray                       # (4, 2) real
    gamma_31: float  # engineered |3> -> |1> decay, rad/s
    gamma_32: float  # engineered |3> -> |2> decay, rad/s
    gamma_21: float  # residual |2> -> |1> decay, rad/s
    omega_13: float  # lab-frame probe transitions, rad/s
    omega_23: float
    omega_14: float
    omega_24: float
    nested: bool     # drive inside the nesting window


@dataclass(frozen=True)
class TransitionCurves:
    """Four transition branches tabulated against drive strength."""

    rabi: np.ndarray      # drive strengths, rad/s
    omega_23: np.ndarray  # rad/s
    omega_13: np.ndarray
    omega_24: np.ndarray
    omega_14: np.ndarray


def mixing_angles(device: DeviceParams, drive: PolaritonDrive) -> MixingAngles:
    """Mixing angles of the two photon-number blocks.

    tan(theta0) = Omega_d / delta0 and tan(theta1) = Omega_d / delta1 with the
    two-argument arctangent, so each angle lies in [0, pi] and passes smoothly
    through pi/2 at zero detuning.  The detunings always satisfy
    delta0 + delta1 = 2*chi.

    Omega_d = 0 on top of a vanishing detuning leaves the angle undefined;
    the convention here is angle 0, reported through the ``degenerate`` flag
    rather than an error.
    """
    delta0 = (device.omega_q - device.chi) - drive.omega_d
    delta1 = drive.omega_d - (device.omega_q - 3.0 * device.chi)
    degenerate = drive.rabi == 0.0 and (delta0 == 0.0 or delta1 == 0.0)
    theta0 = math.atan2(drive.rabi, delta0)
    theta1 = math.atan2(drive.rabi, delta1)
    return MixingAngles(theta0=theta0, theta1=theta1, delta0=delta0,
                        delta1=delta1, degenerate=degenerate)


def in_nesting_regime(device: DeviceParams, drive: PolaritonDrive) -> bool:
    """True when the drive sits strictly between the one- and zero-photon lines."""
    lower = device.omega_q - 3.0 * device.chi
    upper = device.omega_q - device.chi
    return lower < drive.omega_d < upper


def eit_condition(control_rabi: float, device: DeviceParams) -> bool:
    """True when a control drive of this strength keeps the system in the
    EIT regime, Omega_c < gamma_c (strict)."""
    return control_rabi < device.gamma_c


def block_hamiltonians(device, drive):
    """Rotating-frame 2x2 block Hamiltonians.

    Returns (H0, H1): H0 acts on (|g,0>, |e,0>), H1 on (|g,1>, |e,1>).  The
    gauge is fixed so the block eigenvalues are
    (delta0 -/+ sqrt(delta0^2 + Omega_d^2))/2 and
    omega_r + (delta1 -/+ sqrt(delta1^2 + Omega_d^2))/2.
    """
    ang = mixing_angles(device, drive)
    half = 0.5 * drive.rabi
    h0 = np.array([[0.0, half], [half, ang.delta0]])
    h1 = np.array(
        [[device.omega_r + ang.delta1, half], [half, device.omega_r]]
    )
    return h0, h1


def _phase_fixed(vec):
    # make the |g,n> component non-negative; fall back to the |e,n> component
    if abs(vec[0]) > 1e-14:
        return vec if vec[0] > 0 else -vec
    return vec if vec[1] >= 0 else -vec


def build_polaritons(device: DeviceParams, drive: PolaritonDrive) -> PolaritonSystem:
    """Assemble the four polariton levels at one drive setting.

    Eigenvalues and eigenvectors come from the closed-form diagonalization of
    the 2x2 blocks; states are labeled by energy order within each block
    (1 and 3 low, 2 and 4 up).  The engineered decay rates follow the mixing
    angles:

        gamma_31 = gamma_c * sin^2((theta0 + theta1)/2)
        gamma_32 = gamma_c * cos^2((theta0 + theta1)/2)
        gamma_21 = gamma_q * cos^4(theta0 / 2)

    so gamma_31 + gamma_32 = gamma_c identically.  Transition frequencies
    omega_ij = E_j - E_i are lab-frame probe frequencies because the probe
    changes the photon number, not the qubit excitation.
    """
    ang = mixing_angles(device, drive)
    r0 = math.hypot(ang.delta0, drive.rabi)
    r1 = math.hypot(ang.delta1, drive.rabi)
    e1 = 0.5 * (ang.delta0 - r0)
    e2 = 0.5 * (ang.delta0 + r0)
    e3 = device.omega_r + 0.5 * (ang.delta1 - r1)
    e4 = device.omega_r + 0.5 * (ang.delta1 + r1)

    c0, s0 = math.cos(0.5 * ang.theta0), math.sin(0.5 * ang.theta0)
    c1, s1 = math.cos(0.5 * ang.theta1), math.sin(0.5 * ang.theta1)
    amplitudes = np.array(
        [
            _phase_fixed(np.array([c0, -s0])),  # |1> over (|g,0>, |e,0>)
            _phase_fixed(np.array([s0, c0])),   # |2>
            _phase_fixed(np.array([s1, -c1])),  # |3> over (|g,1>, |e,1>)
            _phase_fixed(np.array([c1, s1])),   # |4>
        ]
    )

    half_sum = 0.5 * (ang.theta0 + ang.theta1)
    gamma_31 = device.gamma_c * math.sin(half_sum) ** 2
    gamma_32 = device.gamma_c * math.cos(half_sum) ** 2
    gamma_21 = device.gamma_q * math.cos(0.5 * ang.theta0) ** 4

    return PolaritonSystem(
        angles=ang,
        energies=(e1, e2, e3, e4),
        amplitudes=amplitudes,
        gamma_31=gamma_31,
        gamma_32=gamma_32,
        gamma_21=gamma_21,
        omega_13=e3 - e1,
        omega_23=e3 - e2,
        omega_14=e4 - e1,
        omega_24=e4 - e2,
        nested=in_nesting_regime(device, drive),
    )


def transition_curves(device, omega_d, rabi_values) -> TransitionCurves:
    """Tabulate the four probe transitions over a drive-strength grid."""
    rabi_values = np.asarray(rabi_values, dtype=float)
    out = {"omega_23": [], "omega_13": [], "omega_24": [], "omega_14": []}
    for rabi in rabi_values:
        system = build_polaritons(device, PolaritonDrive(omega_d=omega_d, rabi=float(rabi)))
        for name in out:
            out[name].append(getattr(system, name))
    return TransitionCurves(
        rabi=rabi_values, **{k: np.array(v) for k, v in out.items()}
    )
