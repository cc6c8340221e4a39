"""Bath spectral densities, thermal transforms, and oscillator fits.

Zero-temperature spectral densities J(omega) are defined for omega >= 0
in cm^-1.  The finite-temperature curve C(omega, T) extends to negative
frequency through the antisymmetric continuation and satisfies detailed
balance C(-w) = exp(-w/kT) C(w).  A finite set of damped oscillators
reproduces C through the two-Lorentzian response

    C_osc(w, T) = D [ e^{w/kT} / (k^2 + 4(w-w0)^2) + 1 / (k^2 + 4(w+w0)^2) ]
    D = sqrt(8/pi) k eta^2 / (e^{w0/kT} + 1),   k = k0 e^{-|w|/alpha} w^2/w0^2

with every frequency an ordinary wavenumber.  This form obeys detailed
balance identically: k(-w) = k(w) and the Lorentzians trade places under
w -> -w.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.optimize import least_squares

from .errors import (
    ConvergenceError,
    DomainError,
    IntegrationError,
    ValidationError,
)
from .units import KB_CM1_PER_K

__all__ = [
    "SuperOhmic",
    "Tabulated",
    "Oscillator",
    "OscillatorSet",
    "OscillatorSum",
    "TemperatureSD",
    "FitOptions",
    "eval_J",
    "temperature_transform",
    "eval_C_osc",
    "reorganization_energy",
    "fit_oscillators",
]


@dataclass(frozen=True)
class SuperOhmic:
    """J(w) = lam (w/wc)^2 exp(-w/wc)."""

    lambda_cm1: float = 35.0
    omega_c_cm1: float = 150.0

    def __post_init__(self):
        if self.lambda_cm1 < 0.0 or self.omega_c_cm1 <= 0.0:
            raise DomainError("super-Ohmic form needs lambda >= 0 and omega_c > 0")

    def __call__(self, omega):
        w = np.asarray(omega, dtype=float)
        x = w / self.omega_c_cm1
        out = self.lambda_cm1 * x * x * np.exp(-x)
        return out if out.ndim else float(out)

    def _slope_at_zero(self) -> float:
        return 0.0


@dataclass(frozen=True)
class Tabulated:
    """Sampled J on an ascending grid; linear inside, zero outside."""

    omega_cm1: np.ndarray
    j_cm1: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.omega_cm1, dtype=float)
        j = np.asarray(self.j_cm1, dtype=float)
        if w.ndim != 1 or w.shape != j.shape or w.size < 2:
            raise ValidationError("tabulated density needs matching 1-d columns, >= 2 rows")
        if np.any(np.diff(w) <= 0.0):
            raise ValidationError("tabulated frequency grid must be strictly ascending")
        if w[0] < 0.0:
            raise DomainError("tabulated grid extends to negative frequency")
        if np.any(j < 0.0):
            raise ValidationError("tabulated density has negative values")
        object.__setattr__(self, "omega_cm1", _frozen(w))
        object.__setattr__(self, "j_cm1", _frozen(j))

    @classmethod
    def from_file(cls, path) -> "Tabulated":
        """Two-column numeric text, '#' comments, omega then J in cm^-1."""
        data = np.loadtxt(path, comments="#", ndmin=2)
        if data.shape[1] != 2:
            raise ValidationError(f"{path}: expected two columns, got {data.shape[1]}")
        return cls(data[:, 0], data[:, 1])

    def __call__(self, omega):
        w = np.asarray(omega, dtype=float)
        out = np.interp(w, self.omega_cm1, self.j_cm1, left=0.0, right=0.0)
        return out if out.ndim else float(out)

    def _slope_at_zero(self) -> float:
        if self.omega_cm1[0] > 0.0:
            return 0.0
        return (self.j_cm1[1] - self.j_cm1[0]) / (self.omega_cm1[1] - self.omega_cm1[0])


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Oscillator:
    """One damped mode: frequency, coupling, zero-frequency damping, roll-off."""

    omega0_cm1: float
    eta_cm1: float
    kappa0_cm1: float
    alpha_cm1: float

    def __post_init__(self):
        if (
            self.omega0_cm1 <= 0.0
            or self.eta_cm1 < 0.0
            or self.kappa0_cm1 <= 0.0
            or self.alpha_cm1 <= 0.0
        ):
            raise DomainError(
                "oscillator needs omega0 > 0, eta >= 0, kappa0 > 0, alpha > 0"
            )

    @property
    def q_factor(self) -> float:
        return self.omega0_cm1 / self.kappa0_cm1


@dataclass(frozen=True)
class OscillatorSet:
    """Finite decomposition of a thermal spectral density."""

    oscillators: tuple[Oscillator, ...]

    def __post_init__(self):
        object.__setattr__(self, "oscillators", tuple(self.oscillators))

    def __len__(self) -> int:
        return len(self.oscillators)

    def __iter__(self):
        return iter(self.oscillators)

    def thermal_eval(self, temperature_k: float, omega):
        w = np.asarray(omega, dtype=float)
        total = np.zeros_like(w)
        for osc in self.oscillators:
            total = total + eval_C_osc(osc, temperature_k, w)
        return total if total.ndim else float(total)


@dataclass(frozen=True)
class OscillatorSum:
    """Zero-temperature-equivalent J extracted from a thermal oscillator sum.

    Dividing the thermal curve by 2(n+1) gives the J whose temperature
    transform at ``temperature_k`` reproduces the oscillator sum exactly
    on both frequency signs (the oscillator form already obeys detailed
    balance).
    """

    oscillators: OscillatorSet
    temperature_k: float

    def __post_init__(self):
        if self.temperature_k <= 0.0:
            raise DomainError("temperature must be positive")

    def __call__(self, omega):
        w = np.asarray(omega, dtype=float)
        kt = KB_CM1_PER_K * self.temperature_k
        # 1 / (2 (n+1)) = (1 - e^{-w/kT}) / 2, which vanishes smoothly at 0
        out = self.oscillators.thermal_eval(self.temperature_k, w) * (
            -np.expm1(-w / kt) / 2.0
        )
        return out if out.ndim else float(out)

    def _slope_at_zero(self) -> float:
        return 0.0


SpectralDensityLike = Callable[[float], float]


def eval_J(sd: SpectralDensityLike, omega):
    """Evaluate a zero-temperature spectral density at omega >= 0."""
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0.0):
        raise DomainError("spectral densities are defined for omega >= 0")
    return sd(omega)


@dataclass(frozen=True)
class TemperatureSD:
    """C(w, T) = {1 + coth[w/(2 kT)]} J_A(w) on the whole real axis."""

    base: SpectralDensityLike
    temperature_k: float

    def __post_init__(self):
        if self.temperature_k <= 0.0:
            raise DomainError("temperature must be positive")

    @property
    def kt_cm1(self) -> float:
        return KB_CM1_PER_K * self.temperature_k

    def __call__(self, omega):
        w = np.asarray(omega, dtype=float)
        kt = self.kt_cm1
        j = np.asarray(self.base(np.abs(w)), dtype=float)
        out = np.empty_like(j)
        pos = w > 0.0
        neg = w < 0.0
        # 1 + coth(x) = 2/(1 - e^{-2x}): 2(n+1) for w > 0, 2n(|w|) for w < 0;
        # the occupation underflows to 0 far below -kT, which is the right limit
        with np.errstate(over="ignore"):
            out[pos] = 2.0 * j[pos] / (-np.expm1(-w[pos] / kt))
            out[neg] = 2.0 * j[neg] / np.expm1(-w[neg] / kt)
        zero = ~(pos | neg)
        if np.any(zero):
            out[zero] = 2.0 * kt * _slope_at_zero(self.base)
        return out if out.ndim else float(out)


def _slope_at_zero(sd: SpectralDensityLike) -> float:
    hook = getattr(sd, "_slope_at_zero", None)
    if hook is not None:
        return hook()
    probe = 1e-8
    return sd(probe) / probe


def temperature_transform(sd: SpectralDensityLike, temperature_k: float) -> TemperatureSD:
    """Detailed-balance thermal extension of a spectral density."""
    if temperature_k <= 0.0:
        raise DomainError("temperature must be positive")
    return TemperatureSD(sd, temperature_k)


def eval_C_osc(osc: Oscillator, temperature_k: float, omega):
    """Damped-oscillator thermal response, stable for large w/kT."""
    if temperature_k <= 0.0:
        raise DomainError("temperature must be positive")
    w = np.asarray(omega, dtype=float)
    kt = KB_CM1_PER_K * temperature_k
    w0, eta, k0, alpha = (
        osc.omega0_cm1,
        osc.eta_cm1,
        osc.kappa0_cm1,
        osc.alpha_cm1,
    )
    kappa = k0 * np.exp(-np.abs(w) / alpha) * (w / w0) ** 2
    pref = math.sqrt(8.0 / math.pi) * kappa * eta**2
    # D e^{w/kT} and D written with only decaying exponentials
    x0 = w0 / kt
    denom = 1.0 + math.exp(-x0)
    with np.errstate(over="ignore"):
        grow = np.exp((w - w0) / kt) / denom
        decay = math.exp(-x0) / denom
        out = pref * (
            grow / (kappa**2 + 4.0 * (w - w0) ** 2)
            + decay / (kappa**2 + 4.0 * (w + w0) ** 2)
        )
    return out if out.ndim else float(out)


def reorganization_energy(sd: SpectralDensityLike) -> float:
    """Integral of J(w)/w over w >= 0 by adaptive quadrature."""
    if isinstance(sd, Tabulated):
        pieces = [(0.0, float(sd.omega_cm1[-1]), [float(w) for w in sd.omega_cm1[:-1][:40]])]
    elif isinstance(sd, OscillatorSum):
        # resonances are narrow; split them out of the infinite tail
        marks = sorted(o.omega0_cm1 for o in sd.oscillators.oscillators)
        split = 30.0 * max(marks[-1], KB_CM1_PER_K * sd.temperature_k)
        pieces = [(0.0, split, marks), (split, np.inf, None)]
    else:
        pieces = [(0.0, np.inf, None)]

    def integrand(w):
        return sd(w) / w if w > 0.0 else _slope_at_zero(sd)

    value = err = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for a, b, pts in pieces:
            v, e = quad(integrand, a, b, points=pts, epsrel=1e-8, limit=200)
            value += v
            err += e
    if not math.isfinite(value):
        raise IntegrationError("J(w)/w integral diverges (check the roll-off alpha)")
    if value != 0.0 and not err <= 1e-6 * max(1.0, abs(value)):
        raise IntegrationError(
            f"reorganization-energy quadrature error {err:.2e} for value {value:.6g}"
        )
    return value


@dataclass(frozen=True)
class FitOptions:
    """Multi-start controls for the oscillator decomposition."""

    seed: int = 0
    n_starts: int = 12
    max_restarts: int = 3
    alpha_cm1: float | None = None  # default: 10x the grid maximum
    max_nfev: int = 4000


def relative_rms(model: np.ndarray, target: np.ndarray) -> float:
    scale = math.sqrt(float(np.mean(target**2)))
    if scale == 0.0:
        return math.sqrt(float(np.mean(model**2)))
    return math.sqrt(float(np.mean((model - target) ** 2))) / scale


def _sum_model(log_params: np.ndarray, temperature_k: float, alpha: float,
               grid: np.ndarray) -> np.ndarray:
    # clamp so wandering LM steps stay inside float range
    log_params = np.clip(log_params, -40.0, 40.0)
    k = log_params.size // 3
    total = np.zeros_like(grid)
    for i in range(k):
        w0, eta, k0 = np.exp(log_params[3 * i : 3 * i + 3])
        osc = Oscillator(w0, eta, k0, alpha)
        total += eval_C_osc(osc, temperature_k, grid)
    return total


def _quantile_seeds(grid: np.ndarray, target: np.ndarray, k: int) -> np.ndarray:
    """Place start frequencies at mass quantiles of the target curve."""
    mass = np.maximum(target, 0.0)
    if mass.sum() == 0.0:
        mass = np.ones_like(target)
    cdf = np.cumsum(mass)
    cdf /= cdf[-1]
    probes = (np.arange(k) + 0.5) / k
    w0 = np.interp(probes, cdf, grid)
    return np.maximum(w0, grid[1] if grid[0] == 0.0 else grid[0])


def fit_oscillators(
    target: TemperatureSD | SpectralDensityLike,
    k: int,
    grid: np.ndarray,
    opts: FitOptions = FitOptions(),
) -> tuple[OscillatorSet, float]:
    """Least-squares decomposition of a thermal curve into k oscillators.

    Runs Levenberg-Marquardt from ``opts.n_starts`` deterministic starts
    on log-parameterized (omega0, eta, kappa0) per oscillator, the
    roll-off alpha shared and fixed.  Returns the best oscillator set and
    its relative RMS residual on the grid; ties go to the lowest start
    index, so results are reproducible for a fixed ``opts.seed``.
    """
    if k < 1:
        raise DomainError("need at least one oscillator")
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 3 * k + 1:
        raise ValidationError("grid must be 1-d with more points than parameters")
    temperature_k = getattr(target, "temperature_k", None)
    if temperature_k is None:
        raise ValidationError("fit target must carry a temperature")
    alpha = opts.alpha_cm1 if opts.alpha_cm1 is not None else 10.0 * float(grid.max())
    y = np.asarray(target(grid), dtype=float)
    scale = math.sqrt(float(np.mean(y**2)))
    if scale == 0.0:
        raise ValidationError("fit target vanishes on the whole grid")

    def residuals(log_params):
        return (_sum_model(log_params, temperature_k, alpha, grid) - y) / (
            scale * math.sqrt(grid.size)
        )

    w0_base = _quantile_seeds(grid, y, k)
    eta_base = np.sqrt(
        np.maximum(np.interp(w0_base, grid, y), 1e-6 * y.max())
        * (w0_base / 8.0)
        * math.sqrt(math.pi / 8.0)
    )
    x_base = np.empty(3 * k)
    x_base[0::3] = np.log(w0_base)
    x_base[1::3] = np.log(eta_base)
    x_base[2::3] = np.log(w0_base / 8.0)

    rng = np.random.default_rng(opts.seed)
    best = None
    for attempt in range(opts.max_restarts):
        for start in range(opts.n_starts):
            x0 = x_base.copy()
            if start or attempt:
                x0 += rng.normal(0.0, 0.35 + 0.15 * attempt, x0.shape)
            try:
                sol = least_squares(
                    residuals, x0, method="lm", max_nfev=opts.max_nfev
                )
            except (ValueError, FloatingPointError):
                continue
            if not np.all(np.isfinite(sol.x)):
                continue
            model = _sum_model(sol.x, temperature_k, alpha, grid)
            res = relative_rms(model, y)
            if best is None or res < best[0] - 1e-15:
                best = (res, sol.x.copy())
        if best is not None:
            break
    if best is None:
        raise ConvergenceError(
            f"no oscillator fit converged after {opts.max_restarts} multi-start rounds"
        )
    res, x = best
    x = np.clip(x, -40.0, 40.0)
    oscillators = tuple(
        Oscillator(*np.exp(x[3 * i : 3 * i + 3]), alpha) for i in range(k)
    )
    oscillators = tuple(sorted(oscillators, key=lambda o: o.omega0_cm1))
    return OscillatorSet(oscillators), res
