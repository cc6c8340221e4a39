"""Map a site model plus fitted bath onto tunable-circuit parameters.

Site energies become qubit detunings (gauge-fixed to the lowest site and
lifted by a constant offset), inter-site couplings become coupler
detunings through the dispersive effective-coupling formula, and fitted
bath oscillators are scaled elementwise.  Quality factors are
dimensionless and pass through untouched.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeError, SingularCoupler, UnreachableCoupling, ValidationError
from .model import ExcitonModel
from .spectral import OscillatorSet
from .units import Quantity, ScaleMap, Unit, apply_scale, convert

__all__ = [
    "PARKED_DELTA_GHZ",
    "CompileOptions",
    "CouplerSpec",
    "ScaledOscillator",
    "CircuitPlan",
    "effective_coupling",
    "solve_coupler",
    "compile",
]

#: coupler detuning used when the induced term must vanish entirely
PARKED_DELTA_GHZ = 1e12


@dataclass(frozen=True)
class CompileOptions:
    j_ic_ghz: float = 0.1
    j_jc_ghz: float = 0.1
    j_direct_ghz: float = 0.0
    dominance: float = 10.0
    base_offset_ghz: float = 4.0
    detuning_range_ghz: tuple[float, float] = (0.0, 13.0)
    coupling_limit_ghz: float = 1.0

    def __post_init__(self):
        if self.dominance <= 0.0:
            raise ValidationError("dominance factor must be positive")


@dataclass(frozen=True)
class CouplerSpec:
    """One tunable coupler between qubits i and j (all energies GHz)."""

    j_ij_ghz: float
    j_ic_ghz: float
    j_jc_ghz: float
    delta_i_ghz: float
    delta_j_ghz: float
    delta_c_ghz: float

    @property
    def delta_ghz(self) -> float:
        """Coupler detuning from the qubit midpoint."""
        return self.delta_c_ghz - 0.5 * (self.delta_i_ghz + self.delta_j_ghz)

    def is_dispersive(self, dominance: float = 10.0) -> bool:
        scale = max(
            abs(self.delta_i_ghz - self.delta_j_ghz),
            abs(self.j_ic_ghz),
            abs(self.j_jc_ghz),
        )
        return bool(abs(self.delta_ghz) >= dominance * scale)


@dataclass(frozen=True)
class ScaledOscillator:
    frequency_ghz: float
    coupling_mhz: float
    q_factor: float


@dataclass(frozen=True)
class CircuitPlan:
    """Compiled settings plus two report channels.

    ``feasibility`` lists violated hardware ranges (detunings, coupling
    magnitude, unreachable targets); ``warnings`` carries softer
    diagnostics such as couplers pushed out of the dispersive window.
    """

    detunings_ghz: np.ndarray
    couplers: dict[tuple[int, int], CouplerSpec]
    targets_ghz: dict[tuple[int, int], float]
    oscillators: list[list[ScaledOscillator]]
    scale_factor: float
    feasibility: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return not self.feasibility

    def to_dict(self) -> dict:
        couplers = []
        for (i, j), spec in sorted(self.couplers.items()):
            couplers.append(
                {
                    "i": i,
                    "j": j,
                    "j_ij_ghz": spec.j_ij_ghz,
                    "j_ic_ghz": spec.j_ic_ghz,
                    "j_jc_ghz": spec.j_jc_ghz,
                    "delta_i_ghz": spec.delta_i_ghz,
                    "delta_j_ghz": spec.delta_j_ghz,
                    "delta_c_ghz": spec.delta_c_ghz,
                    "delta_ghz": spec.delta_ghz,
                    "target_g_ghz": self.targets_ghz[(i, j)],
                    "achieved_g_ghz": effective_coupling(spec),
                    "dispersive": spec.is_dispersive(),
                }
            )
        return {
            "scale_factor": self.scale_factor,
            "detunings_ghz": [float(x) for x in self.detunings_ghz],
            "couplers": couplers,
            "oscillators": [
                [
                    {
                        "frequency_ghz": o.frequency_ghz,
                        "coupling_mhz": o.coupling_mhz,
                        "q_factor": o.q_factor,
                    }
                    for o in site
                ]
                for site in self.oscillators
            ],
            "feasibility": list(self.feasibility),
            "warnings": list(self.warnings),
        }


def effective_coupling(spec: CouplerSpec) -> float:
    """Leading-order qubit-qubit coupling g = J_ij - 2 J_ic J_jc / delta."""
    delta = spec.delta_ghz
    if delta == 0.0:
        raise SingularCoupler("coupler sits exactly at the qubit midpoint")
    return spec.j_ij_ghz - 2.0 * spec.j_ic_ghz * spec.j_jc_ghz / delta


def solve_coupler(
    target_g_ghz: float,
    j_ij_ghz: float,
    j_ic_ghz: float,
    j_jc_ghz: float,
    delta_i_ghz: float,
    delta_j_ghz: float,
) -> float:
    """Coupler detuning that realizes ``target_g_ghz``; inverse of the
    effective-coupling formula.

    When the target equals the direct coupling, any sufficiently large
    detuning works; the coupler is parked at ``PARKED_DELTA_GHZ``.
    """
    mid = 0.5 * (delta_i_ghz + delta_j_ghz)
    if target_g_ghz == j_ij_ghz:
        return mid + PARKED_DELTA_GHZ
    if j_ic_ghz * j_jc_ghz == 0.0:
        raise UnreachableCoupling(
            f"target {target_g_ghz} GHz needs an induced term but a "
            "qubit-coupler coupling is zero"
        )
    return mid + 2.0 * j_ic_ghz * j_jc_ghz / (j_ij_ghz - target_g_ghz)


def _scaled_ghz(value_cm1: float, scale: ScaleMap) -> float:
    q = apply_scale(Quantity(value_cm1, Unit.WAVENUMBER_CM1), scale)
    return convert(q, Unit.FREQUENCY_GHZ).magnitude


def _per_site_oscillators(oscillators_per_site, n_sites):
    if isinstance(oscillators_per_site, OscillatorSet):
        return [oscillators_per_site] * n_sites
    sets = list(oscillators_per_site)
    if len(sets) != n_sites:
        raise ShapeError(
            f"need one oscillator set per site: got {len(sets)} for {n_sites}"
        )
    return sets


def compile(
    model: ExcitonModel,
    oscillators_per_site,
    scale: ScaleMap,
    opts: CompileOptions = CompileOptions(),
) -> CircuitPlan:
    """Produce circuit settings realizing the scaled model.

    Every violated hardware range lands in the feasibility report rather
    than raising; only structural mismatches are hard errors.
    """
    n = model.n_sites
    osc_sets = _per_site_oscillators(oscillators_per_site, n)
    report: list[str] = []
    soft: list[str] = []

    base = model.site_energies - np.min(model.site_energies)
    detunings = np.array(
        [_scaled_ghz(e, scale) + opts.base_offset_ghz for e in base]
    )
    lo, hi = opts.detuning_range_ghz
    for j, d in enumerate(detunings):
        if not lo <= d <= hi:
            report.append(
                f"detuning for qubit {j} is {d:.6g} GHz, outside [{lo:g}, {hi:g}] GHz"
            )

    couplers: dict[tuple[int, int], CouplerSpec] = {}
    targets: dict[tuple[int, int], float] = {}
    for i in range(n):
        for j in range(i + 1, n):
            v = model.couplings[i, j]
            if v == 0.0:
                continue
            target = _scaled_ghz(v, scale)
            if abs(target) > opts.coupling_limit_ghz:
                report.append(
                    f"coupling ({i}, {j}) requests {target:.6g} GHz, beyond "
                    f"{opts.coupling_limit_ghz:g} GHz"
                )
            try:
                delta_c = solve_coupler(
                    target,
                    opts.j_direct_ghz,
                    opts.j_ic_ghz,
                    opts.j_jc_ghz,
                    detunings[i],
                    detunings[j],
                )
            except UnreachableCoupling as exc:
                report.append(f"coupler ({i}, {j}): {exc}")
                continue
            spec = CouplerSpec(
                j_ij_ghz=opts.j_direct_ghz,
                j_ic_ghz=opts.j_ic_ghz,
                j_jc_ghz=opts.j_jc_ghz,
                delta_i_ghz=detunings[i],
                delta_j_ghz=detunings[j],
                delta_c_ghz=delta_c,
            )
            if not spec.is_dispersive(opts.dominance):
                soft.append(
                    f"coupler ({i}, {j}) leaves the dispersive regime: "
                    f"|delta| = {abs(spec.delta_ghz):.6g} GHz"
                )
            couplers[(i, j)] = spec
            targets[(i, j)] = target

    oscillators = []
    for site_set in osc_sets:
        rows = [
            ScaledOscillator(
                frequency_ghz=_scaled_ghz(o.omega0_cm1, scale),
                coupling_mhz=_scaled_ghz(o.eta_cm1, scale) * 1e3,
                q_factor=o.q_factor,
            )
            for o in site_set.oscillators
        ]
        oscillators.append(rows)

    return CircuitPlan(
        detunings_ghz=detunings,
        couplers=couplers,
        targets_ghz=targets,
        oscillators=oscillators,
        scale_factor=scale.scale_factor,
        feasibility=report,
        warnings=soft,
    )
