"""Reduced dynamics: secular relaxation, stochastic trajectories, sinks.

Three propagation routes share one convention: energies in cm^-1 become
angular frequencies through 2*pi*c (c in cm/ps), rates are in ps^-1.

* ``redfield_propagate`` evolves eigenbasis populations with a Pauli
  master equation and decays coherences at half the summed outflow.
* ``hsr_trajectory``/``ensemble_average`` evolve pure states under
  stochastic diagonal noise with a Strang-split fixed-step scheme; the
  phase-increment amplitude is normalized so the trajectory average
  reproduces pure dephasing at rate gamma per site.
* ``lindblad_dephasing_propagate`` is the deterministic oracle for that
  average: site-projector jumps at gamma_j plus the same sink drain.

Sinks are anti-Hermitian drains; captured population is tracked as the
lost trace (or lost norm for pure states).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from .errors import (
    DomainError,
    GridError,
    HorizonError,
    ShapeError,
    StepError,
    ValidationError,
)
from .model import EigenSystem, ExcitonModel, _per_site_weight
from .units import ANGULAR_PS_PER_CM1, C_CM_PER_PS, KB_CM1_PER_K

__all__ = [
    "DEGENERACY_TOL_CM1",
    "SinkSpec",
    "WhiteNoise",
    "NoiseSeries",
    "RateMatrix",
    "Trajectory",
    "EnsembleResult",
    "validate_density_matrix",
    "redfield_rates",
    "redfield_propagate",
    "hsr_trajectory",
    "ensemble_average",
    "lindblad_dephasing_propagate",
    "efficiency",
    "enaqt_sweep",
]

# eigenstate pairs closer than this exchange no secular population
DEGENERACY_TOL_CM1 = 0.1

_STEP_SAFETY = 50.0


@dataclass(frozen=True)
class SinkSpec:
    """Irreversible drain on one site."""

    site: int
    rate_ps: float

    def __post_init__(self):
        if self.rate_ps < 0.0:
            raise ValidationError("sink rate must be nonnegative")


@dataclass(frozen=True)
class WhiteNoise:
    """Per-site white dephasing, quoted as a cm^-1-equivalent rate."""

    gamma_cm1: float | np.ndarray

    def rates_ps(self, n_sites: int) -> np.ndarray:
        g = np.broadcast_to(np.asarray(self.gamma_cm1, dtype=float), (n_sites,))
        if np.any(g < 0.0):
            raise ValidationError("dephasing rates must be nonnegative")
        return ANGULAR_PS_PER_CM1 * g


@dataclass(frozen=True)
class NoiseSeries:
    """Sampled site-energy shifts: times in ps, one column per site (cm^-1)."""

    times_ps: np.ndarray
    shifts_cm1: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times_ps, dtype=float)
        s = np.asarray(self.shifts_cm1, dtype=float)
        if t.ndim != 1 or s.ndim != 2 or s.shape[0] != t.size or t.size < 2:
            raise ValidationError("noise series needs times (T,) and shifts (T, n)")
        dt = np.diff(t)
        if np.any(dt <= 0.0):
            raise GridError("noise series times must be strictly ascending")
        if np.max(np.abs(dt - dt[0])) > 1e-9 * dt[0]:
            raise GridError("noise series requires a uniform time grid")
        object.__setattr__(self, "times_ps", t)
        object.__setattr__(self, "shifts_cm1", s)

    @classmethod
    def from_file(cls, path) -> "NoiseSeries":
        data = np.loadtxt(path, comments="#", ndmin=2)
        if data.shape[1] < 2:
            raise ValidationError(f"{path}: need a time column plus site columns")
        return cls(data[:, 0], data[:, 1:])


@dataclass(frozen=True)
class RateMatrix:
    """Secular transfer rates between eigenstates, ps^-1.

    ``down[m, n]`` moves population m -> n when E_m > E_n; ``up`` is the
    reverse sense.  ``up`` is built from ``down`` through the Boltzmann
    factor, so the detailed-balance ratio is exact by construction.
    """

    down: np.ndarray
    up: np.ndarray
    gaps_cm1: np.ndarray

    @property
    def transfer(self) -> np.ndarray:
        return self.down + self.up

    @property
    def out_rates(self) -> np.ndarray:
        return self.transfer.sum(axis=1)


@dataclass(frozen=True)
class Trajectory:
    """One propagated run sampled on a time grid (site-basis observables)."""

    times_ps: np.ndarray
    populations: np.ndarray  # (T, n)
    sink_captured: np.ndarray  # (T,)
    rho: np.ndarray | None = None  # (T, n, n) complex

    def coherence(self, i: int, j: int) -> np.ndarray:
        if self.rho is None:
            raise ValueError("trajectory carries no density matrices")
        return self.rho[:, i, j]


@dataclass(frozen=True)
class EnsembleResult:
    """Trajectory average with per-observable standard errors."""

    times_ps: np.ndarray
    populations: np.ndarray  # (T, n) means
    populations_stderr: np.ndarray
    sink_captured: np.ndarray  # (T,)
    sink_stderr: np.ndarray
    rho: np.ndarray  # (T, n, n) complex mean
    rho_re_stderr: np.ndarray
    rho_im_stderr: np.ndarray
    n_traj: int
    base_seed: int

    def coherence(self, i: int, j: int) -> np.ndarray:
        return self.rho[:, i, j]


def validate_density_matrix(rho: np.ndarray) -> np.ndarray:
    """Hermiticity, trace window [0, 1], positivity to a -1e-9 floor."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ShapeError("density matrix must be square")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
        raise ValidationError("density matrix is not Hermitian")
    tr = float(np.real(np.trace(rho)))
    if not -1e-9 <= tr <= 1.0 + 1e-9:
        raise ValidationError(f"density-matrix trace {tr} outside [0, 1]")
    if float(np.min(np.linalg.eigvalsh(rho))) < -1e-9:
        raise ValidationError("density matrix has a negative eigenvalue")
    return rho


def _occupancy(gap_cm1: float, temperature_k: float) -> float:
    return 1.0 / math.expm1(gap_cm1 / (KB_CM1_PER_K * temperature_k))


def redfield_rates(
    eig: EigenSystem,
    sd_per_site,
    temperature_k: float,
    degeneracy_tol_cm1: float = DEGENERACY_TOL_CM1,
) -> RateMatrix:
    """Golden-rule transfer rates 2 pi gamma_MN J(w_MN) (n+1 down, n up)."""
    if temperature_k <= 0.0:
        raise DomainError("temperature must be positive")
    k = eig.n_states
    down = np.zeros((k, k))
    up = np.zeros((k, k))
    gaps = eig.energies[:, None] - eig.energies[None, :]
    kt = KB_CM1_PER_K * temperature_k
    for m in range(k):
        for n in range(k):
            gap = gaps[m, n]
            if gap <= degeneracy_tol_cm1:
                continue
            weight = _per_site_weight(eig, sd_per_site, m, n, gap)
            occ = _occupancy(gap, temperature_k)
            rate_down = ANGULAR_PS_PER_CM1 * 2.0 * math.pi * weight * (occ + 1.0)
            down[m, n] = rate_down
            up[n, m] = rate_down * math.exp(-gap / kt)
    return RateMatrix(down, up, gaps)


def _check_grid(t_grid) -> np.ndarray:
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size < 1:
        raise GridError("time grid must be a nonempty 1-d array")
    if t.size > 1 and np.any(np.diff(t) <= 0.0):
        raise GridError("time grid must be strictly ascending")
    return t


def redfield_propagate(
    eig: EigenSystem,
    rates: RateMatrix,
    rho0: np.ndarray,
    t_grid,
    dephasing_extra_ps: float = 0.0,
) -> Trajectory:
    """Secular evolution of a site-basis initial state.

    Populations follow the Pauli equation with ``rates``; each coherence
    decays at half the summed outflow of its two states (plus any extra
    pure dephasing) while oscillating at the angular gap.  There is no
    sink in this propagator, so the trace is conserved.
    """
    t = _check_grid(t_grid)
    rho0 = validate_density_matrix(rho0)
    k = eig.n_states
    if rho0.shape != (k, k):
        raise ShapeError("initial state dimension does not match the eigen system")
    sigma0 = eig.to_eigenbasis(rho0)
    p0 = np.real(np.diag(sigma0)).copy()
    transfer = rates.transfer

    def pauli(_t, p):
        return p @ transfer - rates.out_rates * p

    t0, t1 = float(t[0]), float(t[-1])
    if t1 > t0:
        sol = solve_ivp(
            pauli, (t0, t1), p0, t_eval=t, method="RK45", rtol=1e-9, atol=1e-12
        )
        if not sol.success:
            raise StepError(f"population integrator failed: {sol.message}")
        pops_eig = sol.y.T
    else:
        pops_eig = p0[None, :]

    out = rates.out_rates
    decay = 0.5 * (out[:, None] + out[None, :]) + dephasing_extra_ps
    omega_ang = ANGULAR_PS_PER_CM1 * rates.gaps_cm1
    elapsed = t - t0
    rho_t = np.empty((t.size, k, k), dtype=complex)
    coh0 = sigma0 - np.diag(np.diag(sigma0))
    for idx, dt in enumerate(elapsed):
        sigma = coh0 * np.exp((-1j * omega_ang - decay) * dt)
        np.fill_diagonal(sigma, pops_eig[idx])
        rho_t[idx] = eig.to_site_basis(sigma)
    populations = np.real(np.einsum("tii->ti", rho_t))
    return Trajectory(t, populations, np.zeros(t.size), rho_t)


def _normalize_gamma(noise, n_sites):
    if isinstance(noise, WhiteNoise):
        return noise.rates_ps(n_sites), None
    if isinstance(noise, NoiseSeries):
        if noise.shifts_cm1.shape[1] != n_sites:
            raise ShapeError("noise series has the wrong number of site columns")
        return None, noise
    raise ValidationError("noise must be WhiteNoise or NoiseSeries")


def _sink_diag(sink: SinkSpec | None, n_sites: int) -> np.ndarray:
    k = np.zeros(n_sites)
    if sink is not None:
        if not 0 <= sink.site < n_sites:
            raise ShapeError(f"sink site {sink.site} out of range")
        k[sink.site] = sink.rate_ps
    return k


def _hsr_step_count(model, gamma_ps, dt_out):
    v_max = float(np.max(np.abs(model.couplings))) if model.n_sites > 1 else 0.0
    bounds = [dt_out]
    if v_max > 0.0:
        bounds.append(1.0 / (2.0 * C_CM_PER_PS * v_max) / _STEP_SAFETY)
    g_max = float(np.max(gamma_ps)) if gamma_ps is not None else 0.0
    if g_max > 0.0:
        bounds.append(1.0 / g_max / _STEP_SAFETY)
    return max(1, int(math.ceil(dt_out / min(bounds))))


def _validate_psi0(psi0, n_sites):
    psi = np.asarray(psi0, dtype=complex).reshape(-1)
    if psi.size != n_sites:
        raise ShapeError("initial state length does not match the model")
    if abs(np.linalg.norm(psi) - 1.0) > 1e-9:
        raise ValidationError("initial pure state must be normalized")
    return psi


class _HsrPlan:
    """Shared fixed-step schedule and propagators for stochastic runs."""

    def __init__(self, model, noise, sink, t_grid):
        self.t = _check_grid(t_grid)
        n = model.n_sites
        self.gamma_ps, self.series = _normalize_gamma(noise, n)
        k_diag = _sink_diag(sink, n)
        h_ang = ANGULAR_PS_PER_CM1 * model.hamiltonian

        if self.series is None:
            if self.t.size > 1:
                dts = np.diff(self.t)
                if np.max(np.abs(dts - dts[0])) > 1e-9 * dts[0]:
                    raise GridError("white noise requires a uniform output grid")
                dt_out = float(dts[0])
            else:
                dt_out = 0.0
            self.n_sub = _hsr_step_count(model, self.gamma_ps, dt_out) if dt_out else 0
            self.dt = dt_out / self.n_sub if self.n_sub else 0.0
            self.amplitude = np.sqrt(self.gamma_ps * self.dt) if self.n_sub else None
        else:
            ts = self.series.times_ps
            if self.t[0] < ts[0] - 1e-9 or self.t[-1] > ts[-1] + 1e-9:
                raise GridError("output grid extends beyond the noise series")
            series_dt = float(ts[1] - ts[0])
            self.n_sub_per = []
            for a, b in zip(self.t[:-1], self.t[1:]):
                span = float(b - a)
                n_sub = _hsr_step_count(model, None, span)
                n_sub = max(n_sub, int(math.ceil(span / series_dt)))
                self.n_sub_per.append(n_sub)

        self.propagator_half = {}
        if self.series is None:
            if self.n_sub:
                self.propagator_half[self.dt] = expm(
                    (-1j * h_ang - 0.5 * np.diag(k_diag)) * (self.dt / 2.0)
                )
        else:
            for (a, b), n_sub in zip(
                zip(self.t[:-1], self.t[1:]), self.n_sub_per
            ):
                dt = float(b - a) / n_sub
                if dt not in self.propagator_half:
                    self.propagator_half[dt] = expm(
                        (-1j * h_ang - 0.5 * np.diag(k_diag)) * (dt / 2.0)
                    )


def _run_white_chunk(plan: _HsrPlan, psi0: np.ndarray, seeds: Sequence[int]):
    """Propagate one block of trajectories; returns per-output-time stacks."""
    m = len(seeds)
    n = psi0.size
    t = plan.t
    psi = np.tile(psi0[:, None], (1, m))
    out_psi = np.empty((t.size, n, m), dtype=complex)
    out_psi[0] = psi
    if t.size == 1 or plan.n_sub == 0:
        return out_psi
    gens = [np.random.Generator(np.random.Philox(key=int(s))) for s in seeds]
    half = plan.propagator_half[plan.dt]
    amp = plan.amplitude[:, None]
    block = 256
    for k in range(1, t.size):
        done = 0
        while done < plan.n_sub:
            todo = min(block, plan.n_sub - done)
            noise = np.stack(
                [g.standard_normal((todo, n)) for g in gens], axis=-1
            )  # (todo, n, m)
            for s in range(todo):
                psi = half @ psi
                psi *= np.exp(-1j * (amp * noise[s]))
                psi = half @ psi
            done += todo
        out_psi[k] = psi
    return out_psi


def _run_series(plan: _HsrPlan, psi0: np.ndarray):
    t = plan.t
    n = psi0.size
    psi = psi0.copy()
    out_psi = np.empty((t.size, n), dtype=complex)
    out_psi[0] = psi
    series = plan.series
    for k in range(1, t.size):
        a, b = float(t[k - 1]), float(t[k])
        n_sub = plan.n_sub_per[k - 1]
        dt = (b - a) / n_sub
        half = plan.propagator_half[dt]
        mids = a + (np.arange(n_sub) + 0.5) * dt
        shifts = np.empty((n_sub, n))
        for j in range(n):
            shifts[:, j] = np.interp(mids, series.times_ps, series.shifts_cm1[:, j])
        phases = ANGULAR_PS_PER_CM1 * shifts * dt
        for s in range(n_sub):
            psi = half @ psi
            psi *= np.exp(-1j * phases[s])
            psi = half @ psi
        out_psi[k] = psi
    return out_psi


def hsr_trajectory(
    model: ExcitonModel,
    noise,
    sink: SinkSpec | None,
    psi0,
    t_grid,
    seed: int,
) -> Trajectory:
    """One stochastic pure-state run; same seed gives the same trajectory."""
    psi = _validate_psi0(psi0, model.n_sites)
    plan = _HsrPlan(model, noise, sink, t_grid)
    if plan.series is None:
        stack = _run_white_chunk(plan, psi, [seed])
    else:
        stack = _run_series(plan, psi)[:, :, None]
    acc = _accumulate(stack)
    return Trajectory(plan.t, acc["pop"], acc["sink"], acc["rho"])


def ensemble_average(
    model: ExcitonModel,
    noise,
    sink: SinkSpec | None,
    psi0,
    t_grid,
    n_traj: int,
    base_seed: int,
    n_threads: int = 1,
    chunk_size: int = 512,
) -> EnsembleResult:
    """Mean observables over ``n_traj`` runs seeded ``base_seed + index``.

    Chunks of trajectories propagate together (optionally on a thread
    pool); the reduction is performed in chunk order so the result is
    bit-identical however the work is scheduled.
    """
    if n_traj < 1:
        raise ValidationError("need at least one trajectory")
    psi = _validate_psi0(psi0, model.n_sites)
    plan = _HsrPlan(model, noise, sink, t_grid)
    t = plan.t

    if plan.series is not None:
        # deterministic noise: every trajectory is identical, stderr is 0
        acc = _accumulate(_run_series(plan, psi)[:, :, None])
        n = model.n_sites
        return EnsembleResult(
            times_ps=t,
            populations=acc["pop"],
            populations_stderr=np.zeros((t.size, n)),
            sink_captured=acc["sink"],
            sink_stderr=np.zeros(t.size),
            rho=acc["rho"],
            rho_re_stderr=np.zeros((t.size, n, n)),
            rho_im_stderr=np.zeros((t.size, n, n)),
            n_traj=n_traj,
            base_seed=base_seed,
        )

    seed_blocks = [
        list(range(base_seed + lo, base_seed + min(lo + chunk_size, n_traj)))
        for lo in range(0, n_traj, chunk_size)
    ]

    def work(seeds):
        return _accumulate(_run_white_chunk(plan, psi, seeds))

    if n_threads > 1 and len(seed_blocks) > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            partials = list(pool.map(work, seed_blocks))
    else:
        partials = [work(seeds) for seeds in seed_blocks]
    return _reduce(t, partials, n_traj, base_seed)


def _accumulate(stack: np.ndarray):
    """Sum observables over the trajectory axis of a (T, n, m) state stack."""
    pops = np.abs(stack) ** 2  # (T, n, m)
    sink = 1.0 - pops.sum(axis=1)  # (T, m)
    rho = np.einsum("tim,tjm->tij", stack, stack.conj())
    outer = stack[:, :, None, :] * stack[:, None, :, :].conj()
    return {
        "m": stack.shape[2],
        "pop": pops.sum(axis=2),
        "pop2": (pops**2).sum(axis=2),
        "sink": sink.sum(axis=1),
        "sink2": (sink**2).sum(axis=1),
        "rho": rho,
        "rho_re2": (outer.real**2).sum(axis=3),
        "rho_im2": (outer.imag**2).sum(axis=3),
    }


def _stderr(sum_x, sum_x2, count):
    if count < 2:
        return np.zeros_like(sum_x)
    var = np.maximum(sum_x2 - sum_x**2 / count, 0.0) / (count - 1)
    return np.sqrt(var / count)


def _reduce(t, partials, n_traj, base_seed) -> EnsembleResult:
    total = partials[0]
    for part in partials[1:]:
        total = {k: total[k] + part[k] for k in total}
    assert total["m"] == n_traj
    mean_pop = total["pop"] / n_traj
    mean_sink = total["sink"] / n_traj
    mean_rho = total["rho"] / n_traj
    return EnsembleResult(
        times_ps=t,
        populations=mean_pop,
        populations_stderr=_stderr(total["pop"], total["pop2"], n_traj),
        sink_captured=mean_sink,
        sink_stderr=_stderr(total["sink"], total["sink2"], n_traj),
        rho=mean_rho,
        rho_re_stderr=_stderr(total["rho"].real, total["rho_re2"], n_traj),
        rho_im_stderr=_stderr(total["rho"].imag, total["rho_im2"], n_traj),
        n_traj=n_traj,
        base_seed=base_seed,
    )


def lindblad_dephasing_propagate(
    model: ExcitonModel,
    gamma_cm1,
    sink: SinkSpec | None,
    rho0: np.ndarray,
    t_grid,
) -> Trajectory:
    """Pure-dephasing master equation with site projectors and a sink.

    The jump normalization makes the site coherence rho_ij decay at
    exactly gamma (ps^-1 equivalent of the given cm^-1 rate) when both
    sites dephase at gamma, matching the stochastic ensemble.
    """
    t = _check_grid(t_grid)
    n = model.n_sites
    rho0 = validate_density_matrix(rho0)
    if rho0.shape != (n, n):
        raise ShapeError("initial state dimension does not match the model")
    gamma_ps = WhiteNoise(gamma_cm1).rates_ps(n)
    k_diag = _sink_diag(sink, n)
    h_ang = ANGULAR_PS_PER_CM1 * model.hamiltonian
    decay = 0.5 * (gamma_ps[:, None] + gamma_ps[None, :])
    np.fill_diagonal(decay, 0.0)
    drain = 0.5 * (k_diag[:, None] + k_diag[None, :])
    total = decay + drain

    def rhs(_t, y):
        rho = y.reshape(n, n)
        comm = -1j * (h_ang @ rho - rho @ h_ang)
        return (comm - total * rho).ravel()

    if t[-1] > t[0]:
        sol = solve_ivp(
            rhs,
            (float(t[0]), float(t[-1])),
            rho0.ravel(),
            t_eval=t,
            method="RK45",
            rtol=1e-9,
            atol=1e-12,
        )
        if not sol.success:
            raise StepError(f"dephasing integrator failed: {sol.message}")
        rho_t = sol.y.T.reshape(t.size, n, n)
    else:
        rho_t = rho0[None, :, :]
    pops = np.real(np.einsum("tii->ti", rho_t))
    captured = 1.0 - np.real(np.einsum("tii->t", rho_t))
    return Trajectory(t, pops, captured, rho_t)


def efficiency(result, horizon_ps: float) -> float:
    """Sink-captured population at the horizon time."""
    t = result.times_ps
    if not t[0] - 1e-9 <= horizon_ps <= t[-1] + 1e-9:
        raise HorizonError(
            f"horizon {horizon_ps} ps outside the computed grid [{t[0]}, {t[-1]}]"
        )
    return float(np.interp(horizon_ps, t, result.sink_captured))


def enaqt_sweep(
    model: ExcitonModel,
    gamma_list_cm1,
    sink: SinkSpec,
    psi0,
    horizon_ps: float,
    n_traj: int,
    base_seed: int,
    n_threads: int = 1,
) -> list[tuple[float, float, float]]:
    """Transfer efficiency versus dephasing rate, with standard errors.

    Every sweep point reuses the same seed block, so neighbouring
    efficiencies share their noise realizations and the shape of the
    curve is resolved with less Monte-Carlo jitter.
    """
    gammas = np.asarray(gamma_list_cm1, dtype=float)
    if gammas.ndim != 1 or gammas.size < 1:
        raise ValidationError("need at least one dephasing rate")
    if np.any(np.diff(gammas) <= 0.0) and gammas.size > 1:
        raise ValidationError("dephasing rates must be strictly ascending")
    if horizon_ps <= 0.0:
        raise DomainError("horizon must be positive")
    t_grid = np.array([0.0, horizon_ps])
    curve = []
    for gamma in gammas:
        res = ensemble_average(
            model,
            WhiteNoise(float(gamma)),
            sink,
            psi0,
            t_grid,
            n_traj,
            base_seed,
            n_threads=n_threads,
        )
        curve.append((float(gamma), res.sink_captured[-1], res.sink_stderr[-1]))
    return curve
