"""Complex transmission-line fits: EIT and ATS models, AIC weights, group delay.

Both models are pairs of complex Lorentzians sharing the transmission
mapping ln(S21) = i(omega l_eff / c)(1 + chi/2) - alpha0 + i phi0:

    chi_EIT = A+/((w - w+) - i G+/2) - A-/((w - w-) - i G-/2)
    chi_ATS = A1/((w - w1) - i G1/2) + A2/((w - w2) - i G2/2)

The magnitude and phase halves of a trace are fit simultaneously with equal
weights, so the recovered response is Kramers-Kronig consistent by
construction.  Each model has nine free parameters: six line-shape values
plus (l_eff, alpha0, phi0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import c as _C_LIGHT
from scipy.optimize import least_squares
from scipy.signal import find_peaks, peak_widths, savgol_filter

from .errors import DegenerateDataError, MismatchedDataError, ZeroDelayError
from .lindblad import ComplexSpectrum

__all__ = [
    "BaselineParams",
    "EitModelParams",
    "AtsModelParams",
    "FitResult",
    "AicReport",
    "eval_susceptibility",
    "eval_ln_s21",
    "model_spectrum",
    "model_group_delay",
    "fit_model",
    "aic_weights",
    "group_delay",
    "group_velocity",
]

N_FREE = 9
PARAM_NAMES = {
    "eit": ("a_plus", "omega_plus", "gamma_plus",
            "a_minus", "omega_minus", "gamma_minus",
            "l_eff", "alpha0", "phi0"),
    "ats": ("a1", "omega1", "gamma1", "a2", "omega2", "gamma2",
            "l_eff", "alpha0", "phi0"),
}
_SIGNS = {"eit": (1.0, -1.0), "ats": (1.0, 1.0)}
# deterministic multi-start tweaks: (width factor 1, width factor 2, center shift)
_START_TWEAKS = ((1.0, 1.0, 0.0), (1.6, 0.7, 0.15),
                 (0.7, 1.6, -0.15), (1.3, 1.3, 0.35))


@dataclass(frozen=True)
class BaselineParams:
    """Feature-free part of the transmission mapping."""

    l_eff: float   # effective electrical length, m, > 0
    alpha0: float  # background attenuation, natural-log units
    phi0: float    # phase offset, rad

    def __post_init__(self):
        if not (self.l_eff > 0):
            raise ValueError(f"l_eff must be > 0, got {self.l_eff}")


@dataclass(frozen=True)
class EitModelParams:
    """Difference of two Lorentzians; the positive lobe carves the
    suppression feature, the negative lobe carries the broad line."""

    a_plus: float       # rad/s, >= 0
    omega_plus: float   # rad/s
    gamma_plus: float   # rad/s, > 0
    a_minus: float      # rad/s, >= 0
    omega_minus: float  # rad/s
    gamma_minus: float  # rad/s, > 0

    def __post_init__(self):
        if self.a_plus < 0 or self.a_minus < 0:
            raise ValueError("amplitudes must be >= 0")
        if self.gamma_plus <= 0 or self.gamma_minus <= 0:
            raise ValueError("widths must be > 0")


@dataclass(frozen=True)
class AtsModelParams:
    """Sum of two Lorentzians (Autler-Townes doublet)."""

    a1: float
    omega1: float
    gamma1: float
    a2: float
    omega2: float
    gamma2: float

    def __post_init__(self):
        if self.a1 < 0 or self.a2 < 0:
            raise ValueError("amplitudes must be >= 0")
        if self.gamma1 <= 0 or self.gamma2 <= 0:
            raise ValueError("widths must be > 0")

    def canonical(self) -> "AtsModelParams":
        """Order the doublet by center frequency, ties by amplitude."""
        first = (self.a1, self.omega1, self.gamma1)
        second = (self.a2, self.omega2, self.gamma2)
        if (self.omega1, -self.a1) > (self.omega2, -self.a2):
            first, second = second, first
        return AtsModelParams(*first, *second)


@dataclass(frozen=True, eq=False)
class FitResult:
    """One converged (or best-effort) model fit."""

    model: str  # "eit" | "ats"
    params: EitModelParams | AtsModelParams
    baseline: BaselineParams
    rss: float
    n_residuals: int         # stacked magnitude + phase points
    n_free: int              # always 9
    covariance: np.ndarray   # (9, 9), ordered like free_names
    stderr: np.ndarray       # (9,)
    converged: bool
    n_evaluations: int
    gradient_norm: float     # inf-norm of J^T r at the solution
    omega_range: tuple[float, float]

    @property
    def free_names(self):
        return PARAM_NAMES[self.model]

    @property
    def free_values(self):
        p = self.params
        line = ((p.a_plus, p.omega_plus, p.gamma_plus,
                 p.a_minus, p.omega_minus, p.gamma_minus)
                if self.model == "eit" else
                (p.a1, p.omega1, p.gamma1, p.a2, p.omega2, p.gamma2))
        return np.array(line + (self.baseline.l_eff, self.baseline.alpha0,
                                self.baseline.phi0))


@dataclass(frozen=True, eq=False)
class AicReport:
    """Akaike comparison of fits of one data set."""

    models: tuple[str, ...]
    n: int
    k: tuple[int, ...]
    aic: np.ndarray
    delta: np.ndarray
    weights: np.ndarray
    corrected: bool


def _signs_for(params):
    return _SIGNS["eit" if isinstance(params, EitModelParams) else "ats"]


def _line_values(params):
    if isinstance(params, EitModelParams):
        return (params.a_plus, params.omega_plus, params.gamma_plus,
                params.a_minus, params.omega_minus, params.gamma_minus)
    return (params.a1, params.omega1, params.gamma1,
            params.a2, params.omega2, params.gamma2)


def eval_susceptibility(params, omega):
    """Model susceptibility chi(omega) on an angular-frequency grid."""
    omega = np.asarray(omega, dtype=float)
    a1, w1, g1, a2, w2, g2 = _line_values(params)
    s1, s2 = _signs_for(params)
    chi = s1 * a1 / ((omega - w1) - 0.5j * g1)
    chi = chi + s2 * a2 / ((omega - w2) - 0.5j * g2)
    return chi


def _susceptibility_derivative(params, omega):
    omega = np.asarray(omega, dtype=float)
    a1, w1, g1, a2, w2, g2 = _line_values(params)
    s1, s2 = _signs_for(params)
    d1 = (omega - w1) - 0.5j * g1
    d2 = (omega - w2) - 0.5j * g2
    return -s1 * a1 / d1**2 - s2 * a2 / d2**2


def eval_ln_s21(params, baseline, omega):
    """(ln|S21|, phase) of the model; the phase is the analytic
    continuation, never reduced mod 2 pi."""
    omega = np.asarray(omega, dtype=float)
    chi = eval_susceptibility(params, omega)
    kpath = omega * baseline.l_eff / _C_LIGHT
    ln_mag = -baseline.alpha0 - 0.5 * kpath * chi.imag
    phase = baseline.phi0 + kpath * (1.0 + 0.5 * chi.real)
    return ln_mag, phase


def model_spectrum(params, baseline, omega) -> ComplexSpectrum:
    """Synthesize a noise-free trace from model parameters."""
    ln_mag, phase = eval_ln_s21(params, baseline, omega)
    return ComplexSpectrum(omega_p=np.asarray(omega, float),
                           s21=np.exp(ln_mag + 1j * phase), phase=phase)


# ---------------------------------------------------------------- fitting

def _stacked_model(x, omega, signs):
    a1, w1, g1, a2, w2, g2, l_eff, alpha0, phi0 = x
    chi = (signs[0] * a1 / ((omega - w1) - 0.5j * g1)
           + signs[1] * a2 / ((omega - w2) - 0.5j * g2))
    kpath = omega * l_eff / _C_LIGHT
    ln_mag = -alpha0 - 0.5 * kpath * chi.imag
    phase = phi0 + kpath * (1.0 + 0.5 * chi.real)
    return np.concatenate([ln_mag, phase])


def _residuals(x, omega, data, signs):
    return data - _stacked_model(x, omega, signs)


def _jacobian(x, omega, data, signs):
    a1, w1, g1, a2, w2, g2, l_eff, alpha0, phi0 = x
    n = omega.size
    d1 = (omega - w1) - 0.5j * g1
    d2 = (omega - w2) - 0.5j * g2
    chi = signs[0] * a1 / d1 + signs[1] * a2 / d2
    kfac = 0.5j * omega * l_eff / _C_LIGHT  # i k / 2 prefactor of dchi terms
    cols = np.empty((2 * n, N_FREE))

    def put(col, complex_grad):
        cols[:n, col] = complex_grad.real
        cols[n:, col] = complex_grad.imag

    put(0, kfac * signs[0] / d1)                       # a1
    put(1, kfac * signs[0] * a1 / d1**2)               # w1
    put(2, kfac * signs[0] * (0.5j) * a1 / d1**2)      # g1
    put(3, kfac * signs[1] / d2)                       # a2
    put(4, kfac * signs[1] * a2 / d2**2)               # w2
    put(5, kfac * signs[1] * (0.5j) * a2 / d2**2)      # g2
    put(6, 1j * (omega / _C_LIGHT) * (1.0 + 0.5 * chi))  # l_eff
    cols[:n, 7], cols[n:, 7] = -1.0, 0.0               # alpha0
    cols[:n, 8], cols[n:, 8] = 0.0, 1.0                # phi0
    return -cols  # residual = data - model


@dataclass
class _Feature:
    center: float
    width: float
    depth: float  # prominence in ln units, always > 0
    is_dip: bool


def _detect_features(omega, ln_mag):
    """Extrema of the smoothed trace; sorted by prominence, strongest first.

    A suppression dip riding on top of a broad peak never crosses the
    baseline, so dip/peak classification comes from which orientation the
    extremum was found in, not from its sign against the median.
    """
    n = omega.size
    y = ln_mag - np.median(ln_mag)
    if n >= 7:
        # keep the window a small fraction of the trace or narrow features
        # smear out before find_peaks ever sees them
        win = max(5, 2 * (n // 60) + 1)
        win = min(win, n - 1 if n % 2 == 0 else n)
        ys = savgol_filter(y, win, 2)
    else:
        ys = y
    span = float(np.ptp(ys))
    # a constant trace leaves only rounding wiggles of order eps*|ln_mag|
    floor = 64.0 * np.finfo(float).eps * max(1.0, float(np.abs(ln_mag).max()))
    if not np.isfinite(span) or span <= floor:
        raise DegenerateDataError("flat spectrum: no extrema to seed from")
    dw = float(np.median(np.diff(omega)))
    feats = []
    for is_dip, arr in ((False, ys), (True, -ys)):
        idx, props = find_peaks(arr, prominence=0.05 * span)
        if idx.size == 0:
            continue
        widths = peak_widths(arr, idx, rel_height=0.5)[0]
        for j, i in enumerate(idx):
            feats.append(_Feature(
                center=float(omega[i]),
                width=max(float(widths[j]) * dw, dw),
                depth=float(props["prominences"][j]),
                is_dip=is_dip,
            ))
    if not feats:
        raise DegenerateDataError("no extrema above prominence threshold")
    feats.sort(key=lambda f: -f.depth)
    return feats


def _baseline_seed(omega, ln_mag, phase):
    # Across a narrow window the cable term omega*L/c is nearly constant,
    # so the within-window slope cannot resolve L.  Seed L from the mean
    # total phase with phi0 taken as zero and let the optimizer split the
    # two along the (admittedly shallow) valley between them.
    wbar = float(np.mean(omega))
    pbar = float(np.mean(phase))
    l_eff = pbar * _C_LIGHT / wbar
    if not np.isfinite(l_eff) or l_eff <= 0:
        l_eff = 1e-4
    alpha0 = -float(np.median(ln_mag))
    phi0 = pbar - wbar * l_eff / _C_LIGHT
    return l_eff, alpha0, phi0


def _seed_vector(omega, ln_mag, phase, model):
    l_eff, alpha0, phi0 = _baseline_seed(omega, ln_mag, phase)
    kbar = float(np.mean(omega)) * l_eff / _C_LIGHT
    feats = _detect_features(omega, ln_mag)
    dips = [f for f in feats if f.is_dip]
    peaks = [f for f in feats if not f.is_dip]
    span = float(omega[-1] - omega[0])

    if model == "eit":
        # positive lobe makes a dip, negative lobe makes a peak
        plus = dips[0] if dips else _Feature(feats[0].center,
                                             feats[0].width / 4,
                                             feats[0].depth / 4, True)
        minus = peaks[0] if peaks else _Feature(feats[0].center,
                                                feats[0].width * 4,
                                                feats[0].depth / 4, False)
        pair = (plus, minus)
    else:
        if len(dips) >= 2:
            pair = (dips[0], dips[1])
        elif len(feats) >= 2:
            pair = (feats[0], feats[1])
        else:
            f = feats[0]
            pair = (f, _Feature(f.center + max(3 * f.width, 0.1 * span),
                                f.width, f.depth / 2, f.is_dip))

    x = np.empty(N_FREE)
    for j, f in enumerate(pair):
        # feature depth ~= kbar * A / Gamma at its center
        x[3 * j] = f.depth * f.width / kbar
        x[3 * j + 1] = f.center
        x[3 * j + 2] = f.width
    x[6], x[7], x[8] = l_eff, alpha0, phi0
    return x


def _start_points(x0, n_starts):
    starts = []
    for f1, f2, shift in _START_TWEAKS[:max(1, n_starts)]:
        x = x0.copy()
        x[0] *= f1
        x[2] *= f1
        x[3] *= f2
        x[5] *= f2
        x[1] += shift * x0[2]
        x[4] -= shift * x0[5]
        starts.append(x)
    return starts


def fit_model(spectrum: ComplexSpectrum, model: str, n_starts: int = 4) -> FitResult:
    """Simultaneous magnitude/phase Levenberg-Marquardt fit of one model.

    Seeds come from extrema of the smoothed magnitude trace plus a linear
    phase fit; ``n_starts`` deterministic perturbations of that seed are
    polished and the admissible solution with the lowest residual sum of
    squares wins.  Convergence means a relative RSS change below 1e-10 or a
    vanishing projected gradient (MINPACK ftol/gtol); hitting the evaluation
    cap flags the result instead of raising.

    Raises
    ------
    DegenerateDataError
        If the trace is flat (no extrema to seed from) or too short.
    """
    if model not in _SIGNS:
        raise ValueError(f"unknown model {model!r}")
    omega = spectrum.omega_p
    if omega.size < 3 * N_FREE:
        raise DegenerateDataError(
            f"need at least {3 * N_FREE} points, got {omega.size}"
        )
    ln_mag = spectrum.ln_mag
    phase = spectrum.phase
    data = np.concatenate([ln_mag, phase])
    signs = _SIGNS[model]
    x0 = _seed_vector(omega, ln_mag, phase, model)

    # noise floor from successive differences; a run that reaches it has
    # nothing left to gain from more start points
    floor = 0.0
    for channel in (ln_mag, phase):
        sigma = np.median(np.abs(np.diff(channel))) / (0.6745 * math.sqrt(2.0))
        floor += channel.size * sigma**2

    runs = []
    for start in _start_points(x0, n_starts):
        try:
            sol = least_squares(
                _residuals, start, jac=_jacobian, args=(omega, data, signs),
                method="lm", ftol=1e-10, xtol=1e-10, gtol=1e-8,
                x_scale="jac", max_nfev=700,
            )
        except (ValueError, np.linalg.LinAlgError):
            continue
        x = sol.x.copy()
        admissible = True
        if model == "eit" and x[0] < 0 and x[3] < 0:
            # both lobes negative is the same model with the roles swapped
            x[:6] = [-x[3], x[4], x[5], -x[0], x[1], x[2]]
        if x[0] < 0 or x[3] < 0:
            admissible = False
        if x[2] <= 0 or x[5] <= 0 or x[6] <= 0:
            admissible = False
        rss = float(np.sum(sol.fun**2)) if admissible else np.inf
        runs.append((admissible, rss, x, sol))
        if admissible and sol.status > 0 and rss <= 2.0 * floor:
            break
    if not runs:
        raise DegenerateDataError("no fit attempt produced a solution")

    admissible_runs = [r for r in runs if r[0]]
    if admissible_runs:
        _, _, x, sol = min(admissible_runs, key=lambda r: r[1])
        forced = False
    else:
        # salvage the least-bad run by clamping onto the admissible boundary
        sol = min(runs, key=lambda r: float(np.sum(r[3].fun**2)))[3]
        x = sol.x.copy()
        span = float(omega[-1] - omega[0])
        x[0], x[3] = max(x[0], 0.0), max(x[3], 0.0)
        x[2], x[5] = max(x[2], 1e-9 * span), max(x[5], 1e-9 * span)
        x[6] = max(x[6], 1e-12)
        forced = True

    resid = _residuals(x, omega, data, signs)
    rss = float(resid @ resid)
    jac = _jacobian(x, omega, data, signs)
    grad_norm = float(np.max(np.abs(jac.T @ resid)))
    dof = data.size - N_FREE
    jtj = jac.T @ jac
    try:
        cov = np.linalg.inv(jtj) * (rss / dof)
    except np.linalg.LinAlgError:
        cov = np.linalg.pinv(jtj) * (rss / dof)
    stderr = np.sqrt(np.clip(np.diag(cov), 0.0, None))

    if model == "eit":
        params = EitModelParams(*x[:6])
    else:
        params = AtsModelParams(*x[:6]).canonical()
    baseline = BaselineParams(l_eff=float(x[6]), alpha0=float(x[7]),
                              phi0=float(x[8]))
    return FitResult(
        model=model,
        params=params,
        baseline=baseline,
        rss=rss,
        n_residuals=data.size,
        n_free=N_FREE,
        covariance=cov,
        stderr=stderr,
        converged=bool(sol.status > 0 and not forced),
        n_evaluations=int(sol.nfev),
        gradient_norm=grad_norm,
        omega_range=(float(omega[0]), float(omega[-1])),
    )


# ------------------------------------------------------------- selection

def aic_weights(results, corrected: bool = False) -> AicReport:
    """Akaike weights across fits of the same trace.

    AIC = n ln(RSS/n) + 2k over the stacked residual count n; the optional
    small-sample correction adds 2k(k+1)/(n-k-1).  Weights are
    exp(-delta_i/2) normalized to unit sum.

    Raises
    ------
    MismatchedDataError
        If the fits do not share one residual count.
    """
    results = list(results)
    if len(results) < 2:
        raise ValueError("need at least two fits to compare")
    n = results[0].n_residuals
    if any(r.n_residuals != n for r in results):
        raise MismatchedDataError(
            "fits compare different data: residual counts "
            f"{[r.n_residuals for r in results]}"
        )
    ks = tuple(r.n_free for r in results)
    aic = np.array([n * np.log(r.rss / n) + 2 * r.n_free for r in results])
    if corrected:
        if n - max(ks) - 1 <= 0:
            raise ValueError("too few residuals for the small-sample correction")
        aic = aic + np.array([2 * k * (k + 1) / (n - k - 1) for k in ks])
    delta = aic - aic.min()
    rel = np.exp(-0.5 * delta)
    weights = rel / rel.sum()
    return AicReport(models=tuple(r.model for r in results), n=n, k=ks,
                     aic=aic, delta=delta, weights=weights,
                     corrected=corrected)


# ----------------------------------------------------------- group delay

def model_group_delay(params, baseline, omega):
    """Analytic group delay tau_g = -d(phase)/d(omega) of the model, in s."""
    omega = np.asarray(omega, dtype=float)
    chi = eval_susceptibility(params, omega)
    dchi = _susceptibility_derivative(params, omega)
    lc = baseline.l_eff / _C_LIGHT
    return -(lc * (1.0 + 0.5 * chi.real) + 0.5 * omega * lc * dchi.real)


def group_delay(result: FitResult, omega):
    """Group delay of a fitted model on an angular-frequency grid."""
    return model_group_delay(result.params, result.baseline, omega)


def group_velocity(tau_g: float, length: float) -> float:
    """Group velocity v_g = length / tau_g for a sample of length ``length``.

    Raises
    ------
    ZeroDelayError
        If the delay vanishes.
    """
    if not (length > 0):
        raise ValueError(f"length must be > 0, got {length}")
    if tau_g == 0:
        raise ZeroDelayError("group delay is zero, group velocity undefined")
    return length / tau_g
