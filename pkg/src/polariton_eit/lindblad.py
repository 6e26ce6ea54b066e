"""Driven three-level Lambda system: Lindblad generator and steady states.

Levels |1> and |2> are the two lower polaritons, |3> the shared upper level.
A probe drives 1-3 and a control drives 2-3.  In the double rotating frame
the Hamiltonian is

    H = -Delta_p |3><3| - (Delta_p - Delta_c) |2><2|
        + (Omega_p/2)(|3><1| + h.c.) + (Omega_c/2)(|3><2| + h.c.)

with Delta_p = omega_p - omega_13 and Delta_c = omega_c - omega_23.  Decay
enters through collapse operators sqrt(gamma_31)|1><3|, sqrt(gamma_32)|2><3|,
sqrt(gamma_21)|1><2| and optional pure dephasing sqrt(gamma_phi_k/2)|k><k|.

The Liouvillian acts on the column-stacked density matrix (Fortran order),
so vec(A rho B) = (B^T kron A) vec(rho).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.constants import c as _C_LIGHT

from .errors import (
    DegenerateAngleError,
    NonPhysicalStateError,
    SingularSystemError,
)

__all__ = [
    "LambdaConfig",
    "DensityMatrix3",
    "TransmissionMapping",
    "SpectrumPoint",
    "ComplexSpectrum",
    "build_hamiltonian",
    "collapse_operators",
    "build_liouvillian",
    "steady_state",
    "probe_sweep",
    "dark_state_fidelity",
    "fidelity_scan",
]

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-9
RESIDUAL_REL_TOL = 1e-10


@dataclass(frozen=True)
class LambdaConfig:
    """Rates, drive strengths and drive frequencies of the Lambda system."""

    omega_13: float      # 1-3 transition, rad/s
    omega_23: float      # 2-3 transition, rad/s
    gamma_31: float      # rad/s, >= 0
    gamma_32: float
    gamma_21: float
    probe_rabi: float    # Omega_p, rad/s, >= 0
    control_rabi: float  # Omega_c, rad/s, >= 0
    omega_p: float       # probe frequency, rad/s
    omega_c: float       # control frequency, rad/s
    gamma_phi2: float = 0.0  # optional pure dephasing of |2>
    gamma_phi3: float = 0.0  # optional pure dephasing of |3>

    def __post_init__(self):
        rates = (self.gamma_31, self.gamma_32, self.gamma_21,
                 self.gamma_phi2, self.gamma_phi3)
        if any(r < 0 for r in rates):
            raise ValueError("decay and dephasing rates must be >= 0")
        if self.probe_rabi < 0 or self.control_rabi < 0:
            raise ValueError("drive strengths must be >= 0")
        if not (self.omega_13 > self.omega_23):
            raise ValueError(
                "omega_13 must exceed omega_23 (level 2 lies above level 1)"
            )

    @classmethod
    def from_polaritons(cls, system, *, probe_rabi, control_rabi,
                        omega_p=None, omega_c=None, **overrides):
        """Adopt transition frequencies and rates from a PolaritonSystem.

        Drive frequencies default to the respective resonances.
        """
        values = dict(
            omega_13=system.omega_13,
            omega_23=system.omega_23,
            gamma_31=system.gamma_31,
            gamma_32=system.gamma_32,
            gamma_21=system.gamma_21,
            probe_rabi=probe_rabi,
            control_rabi=control_rabi,
            omega_p=system.omega_13 if omega_p is None else omega_p,
            omega_c=system.omega_23 if omega_c is None else omega_c,
        )
        values.update(overrides)
        return cls(**values)

    @property
    def delta_p(self):
        return self.omega_p - self.omega_13

    @property
    def delta_c(self):
        return self.omega_c - self.omega_23


@dataclass(frozen=True, eq=False)
class DensityMatrix3:
    """Validated 3x3 density matrix.

    Construction enforces hermiticity within 1e-10, unit trace within 1e-10
    and eigenvalues above -1e-9; anything worse raises NonPhysicalStateError.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (3, 3):
            raise NonPhysicalStateError(f"expected a 3x3 matrix, got {m.shape}")
        object.__setattr__(self, "matrix", m)
        herm = np.max(np.abs(m - m.conj().T))
        if herm > HERMITICITY_TOL:
            raise NonPhysicalStateError(f"hermiticity violated by {herm:.3e}")
        tr = abs(np.trace(m) - 1.0)
        if tr > TRACE_TOL:
            raise NonPhysicalStateError(f"trace deviates from 1 by {tr:.3e}")
        lo = np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min()
        if lo < -POSITIVITY_TOL:
            raise NonPhysicalStateError(f"negative eigenvalue {lo:.3e}")

    @property
    def populations(self):
        return np.real(np.diag(self.matrix)).copy()

    @property
    def rho_31(self):
        return complex(self.matrix[2, 0])


@dataclass(frozen=True)
class TransmissionMapping:
    """Parameters turning the probe coherence into a feedline transmission.

    The dimensionless susceptibility is chi_s = scale * rho_31 / Omega_p and
    enters as ln(S21) = i (omega_p l_eff / c)(1 + chi_s/2) - alpha0 + i phi0.
    """

    scale: float   # rad/s; sign selects the response orientation
    l_eff: float   # effective electrical length, m, > 0
    alpha0: float  # background attenuation, natural-log units
    phi0: float    # phase offset, rad

    def __post_init__(self):
        if not (self.l_eff > 0):
            raise ValueError(f"l_eff must be > 0, got {self.l_eff}")


@dataclass(frozen=True)
class SpectrumPoint:
    omega_p: float
    rho_31: complex | None
    s21: complex


@dataclass(frozen=True, eq=False)
class ComplexSpectrum:
    """Complex transmission trace on a strictly ascending probe grid.

    ``phase`` is the unwrapped phase in radians; simulated traces carry the
    analytic continuation directly, ingested traces are unwrapped on load.
    """

    omega_p: np.ndarray          # rad/s, strictly ascending
    s21: np.ndarray              # complex
    phase: np.ndarray            # rad, unwrapped
    rho_31: np.ndarray | None = field(default=None)

    def __post_init__(self):
        w = np.asarray(self.omega_p, dtype=float)
        s = np.asarray(self.s21, dtype=complex)
        p = np.asarray(self.phase, dtype=float)
        if w.ndim != 1 or w.size < 1:
            raise ValueError("omega_p must be a non-empty 1-d array")
        if s.shape != w.shape or p.shape != w.shape:
            raise ValueError("omega_p, s21 and phase must share one shape")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(s))
                and np.all(np.isfinite(p))):
            raise ValueError("spectrum contains non-finite values")
        if np.any(np.diff(w) <= 0):
            raise ValueError("omega_p must be strictly ascending")
        object.__setattr__(self, "omega_p", w)
        object.__setattr__(self, "s21", s)
        object.__setattr__(self, "phase", p)
        if self.rho_31 is not None:
            r = np.asarray(self.rho_31, dtype=complex)
            if r.shape != w.shape:
                raise ValueError("rho_31 must match omega_p in shape")
            object.__setattr__(self, "rho_31", r)

    @classmethod
    def from_s21(cls, omega_p, s21, rho_31=None):
        """Wrap raw complex data, unwrapping the phase along the grid."""
        s21 = np.asarray(s21, dtype=complex)
        phase = np.unwrap(np.angle(s21))
        return cls(omega_p=np.asarray(omega_p, float), s21=s21,
                   phase=phase, rho_31=rho_31)

    def __len__(self):
        return self.omega_p.size

    def __getitem__(self, i) -> SpectrumPoint:
        r = None if self.rho_31 is None else complex(self.rho_31[i])
        return SpectrumPoint(omega_p=float(self.omega_p[i]), rho_31=r,
                             s21=complex(self.s21[i]))

    @property
    def ln_mag(self):
        return np.log(np.abs(self.s21))


def build_hamiltonian(cfg: LambdaConfig) -> np.ndarray:
    """Rotating-frame Hamiltonian on the basis (|1>, |2>, |3>)."""
    h = np.zeros((3, 3), dtype=complex)
    h[2, 2] = -cfg.delta_p
    h[1, 1] = -(cfg.delta_p - cfg.delta_c)
    h[2, 0] = h[0, 2] = 0.5 * cfg.probe_rabi
    h[2, 1] = h[1, 2] = 0.5 * cfg.control_rabi
    return h


def collapse_operators(cfg: LambdaConfig) -> list[np.ndarray]:
    """Collapse operators; dephasing channels appear only when nonzero."""
    ops = []
    def ket_bra(i, j, rate):
        m = np.zeros((3, 3), dtype=complex)
        m[i, j] = np.sqrt(rate)
        return m
    if cfg.gamma_31 > 0:
        ops.append(ket_bra(0, 2, cfg.gamma_31))
    if cfg.gamma_32 > 0:
        ops.append(ket_bra(1, 2, cfg.gamma_32))
    if cfg.gamma_21 > 0:
        ops.append(ket_bra(0, 1, cfg.gamma_21))
    if cfg.gamma_phi2 > 0:
        ops.append(ket_bra(1, 1, 0.5 * cfg.gamma_phi2))
    if cfg.gamma_phi3 > 0:
        ops.append(ket_bra(2, 2, 0.5 * cfg.gamma_phi3))
    return ops


def build_liouvillian(cfg: LambdaConfig) -> np.ndarray:
    """9x9 generator acting on the column-stacked density matrix."""
    h = build_hamiltonian(cfg)
    eye = np.eye(3)
    lv = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for op in collapse_operators(cfg):
        opc = op.conj()
        anti = op.conj().T @ op
        lv += np.kron(opc, op)
        lv -= 0.5 * (np.kron(eye, anti) + np.kron(anti.T, eye))
    return lv


def vec(rho):
    """Column-stack a matrix."""
    return np.asarray(rho).flatten(order="F")


def unvec(v):
    """Inverse of :func:`vec` for 3x3 matrices."""
    return np.asarray(v).reshape((3, 3), order="F")


def steady_state(cfg: LambdaConfig) -> DensityMatrix3:
    """Unique steady state of the Lindblad generator.

    Solves L vec(rho) = 0 with the rho_11 row replaced by the trace
    constraint.  The raw generator residual must satisfy
    ||L vec(rho)|| <= 1e-10 ||L||_F, otherwise the system is reported as
    singular together with a condition estimate.  Needs at least one
    positive decay or dephasing rate; a purely unitary generator has no
    unique fixed point.
    """
    lv = build_liouvillian(cfg)
    a = lv.copy()
    a[0, :] = 0.0
    a[0, [0, 4, 8]] = 1.0
    b = np.zeros(9, dtype=complex)
    b[0] = 1.0
    try:
        v = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(
            f"steady-state system is singular: {exc}",
            condition=float(np.linalg.cond(a)),
        ) from None
    norm_l = np.linalg.norm(lv)
    residual = np.linalg.norm(lv @ v)
    if not np.all(np.isfinite(v)) or residual > RESIDUAL_REL_TOL * norm_l:
        raise SingularSystemError(
            "steady-state residual too large: "
            f"{residual:.3e} > {RESIDUAL_REL_TOL:.0e} * ||L|| = "
            f"{RESIDUAL_REL_TOL * norm_l:.3e}",
            condition=float(np.linalg.cond(a)),
        )
    return DensityMatrix3(matrix=unvec(v))


def probe_sweep(cfg: LambdaConfig, omega_p_values,
                mapping: TransmissionMapping) -> ComplexSpectrum:
    """Steady-state transmission trace over a probe-frequency grid.

    Each grid point is an independent steady-state solve; the result does not
    depend on evaluation order.  Requires a nonzero probe strength because
    chi_s divides by Omega_p.
    """
    if cfg.probe_rabi <= 0:
        raise ValueError("probe_sweep needs probe_rabi > 0")
    omega_p_values = np.asarray(omega_p_values, dtype=float)
    rho31 = np.empty(omega_p_values.size, dtype=complex)
    for i, w in enumerate(omega_p_values):
        rho = steady_state(replace(cfg, omega_p=float(w)))
        rho31[i] = rho.rho_31
    chi = mapping.scale * rho31 / cfg.probe_rabi
    kpath = omega_p_values * mapping.l_eff / _C_LIGHT
    ln_mag = -mapping.alpha0 - 0.5 * kpath * chi.imag
    phase = mapping.phi0 + kpath * (1.0 + 0.5 * chi.real)
    s21 = np.exp(ln_mag + 1j * phase)
    return ComplexSpectrum(omega_p=omega_p_values, s21=s21, phase=phase,
                           rho_31=rho31)


def dark_state_fidelity(rho, probe_rabi, control_rabi) -> float:
    """Overlap fidelity sqrt(<D|rho|D>) with the dark state.

    |D> = cos(Theta)|1> - sin(Theta)|2> with Theta = atan2(Omega_p, Omega_c),
    so the control-off limit gives Theta = pi/2 and |D> = -|2>.

    Raises
    ------
    DegenerateAngleError
        If both drive strengths are zero (the mixing angle is undefined).
    """
    if probe_rabi == 0 and control_rabi == 0:
        raise DegenerateAngleError(
            "dark state undefined: both drive strengths are zero"
        )
    theta = np.arctan2(probe_rabi, control_rabi)
    dark = np.array([np.cos(theta), -np.sin(theta), 0.0])
    m = rho.matrix if isinstance(rho, DensityMatrix3) else np.asarray(rho)
    overlap = float(np.real(dark @ m @ dark))
    return float(np.sqrt(max(overlap, 0.0)))


def fidelity_scan(cfg: LambdaConfig, strengths, swap_roles=False):
    """Dark-state fidelity along a drive-strength grid.

    By default the scanned value replaces the control strength; with
    ``swap_roles`` it replaces the probe strength instead, covering the case
    where the dark state is pushed onto |2>.
    Returns (strengths, fidelities).
    """
    strengths = np.asarray(strengths, dtype=float)
    out = np.empty(strengths.size)
    for i, s in enumerate(strengths):
        if swap_roles:
            point = replace(cfg, probe_rabi=float(s))
        else:
            point = replace(cfg, control_rabi=float(s))
        rho = steady_state(point)
        out[i] = dark_state_fidelity(rho, point.probe_rabi, point.control_rabi)
    return strengths, out
