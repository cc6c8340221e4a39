"""Unit-tagged scalar quantities and the molecule-to-simulator scale map.

Internal convention used throughout the package: energies are wavenumbers
(cm^-1), times are picoseconds.  A wavenumber E corresponds to the angular
frequency 2*pi*c*E with c in cm/ps, which fixes every time-domain factor
(dynamic phases, rate constants) unambiguously.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass

from .errors import DomainError, IncompatibleUnits

# CODATA exact values.
PLANCK_J_S = 6.62607015e-34
BOLTZMANN_J_PER_K = 1.380649e-23
SPEED_OF_LIGHT_CM_PER_S = 2.99792458e10

#: speed of light in cm/ps; 2*pi*C_CM_PER_PS converts cm^-1 to rad/ps
C_CM_PER_PS = SPEED_OF_LIGHT_CM_PER_S * 1e-12

#: GHz per cm^-1
GHZ_PER_CM1 = SPEED_OF_LIGHT_CM_PER_S * 1e-9

#: k_B/(h c): wavenumber equivalent of 1 K, ~0.695 cm^-1/K
KB_CM1_PER_K = BOLTZMANN_J_PER_K / (PLANCK_J_S * SPEED_OF_LIGHT_CM_PER_S)

#: rad/ps per cm^-1 (the hbar convention of this package)
ANGULAR_PS_PER_CM1 = 2.0 * math.pi * C_CM_PER_PS


class Unit(enum.Enum):
    WAVENUMBER_CM1 = "cm^-1"
    FREQUENCY_GHZ = "GHz"
    FREQUENCY_MHZ = "MHz"
    TEMPERATURE_K = "K"
    TEMPERATURE_MK = "mK"
    TIME_FS = "fs"
    TIME_PS = "ps"
    TIME_NS = "ns"
    DIMENSIONLESS = "1"

    def __str__(self) -> str:
        return self.value


# Linear factors into the canonical unit of each dimension class.
_ENERGY_TO_CM1 = {
    Unit.WAVENUMBER_CM1: 1.0,
    Unit.FREQUENCY_GHZ: 1.0 / GHZ_PER_CM1,
    Unit.FREQUENCY_MHZ: 1.0e-3 / GHZ_PER_CM1,
    Unit.TEMPERATURE_K: KB_CM1_PER_K,
    Unit.TEMPERATURE_MK: KB_CM1_PER_K * 1e-3,
}

_TIME_TO_PS = {
    Unit.TIME_FS: 1e-3,
    Unit.TIME_PS: 1.0,
    Unit.TIME_NS: 1e3,
}


def _dimension(unit: Unit) -> str:
    if unit in _ENERGY_TO_CM1:
        return "energy"
    if unit in _TIME_TO_PS:
        return "time"
    return "dimensionless"


@dataclass(frozen=True)
class Quantity:
    """Immutable scalar with a unit tag."""

    magnitude: float
    unit: Unit

    def to(self, target: Unit) -> "Quantity":
        return convert(self, target)

    def in_unit(self, target: Unit) -> float:
        return convert(self, target).magnitude

    @property
    def dimension(self) -> str:
        return _dimension(self.unit)

    def __format__(self, spec: str) -> str:
        return f"{self.magnitude:{spec}} {self.unit.value}"

    def __str__(self) -> str:
        return f"{self.magnitude:g} {self.unit.value}"


_QUANTITY_RE = re.compile(r"^\s*([-+0-9.eE]+)\s*([^\s]*)\s*$")
_UNIT_BY_SUFFIX = {u.value: u for u in Unit}
_UNIT_BY_SUFFIX["cm-1"] = Unit.WAVENUMBER_CM1
_UNIT_BY_SUFFIX["1/cm"] = Unit.WAVENUMBER_CM1
_UNIT_BY_SUFFIX[""] = Unit.DIMENSIONLESS


def parse_quantity(text: str) -> Quantity:
    """Parse strings like ``"35 cm^-1"``, ``"1 ns"``, ``"300 K"``."""
    m = _QUANTITY_RE.match(text)
    if m is None:
        raise DomainError(f"cannot parse quantity from {text!r}")
    value, suffix = m.groups()
    if suffix not in _UNIT_BY_SUFFIX:
        raise IncompatibleUnits(f"unknown unit suffix {suffix!r} in {text!r}")
    try:
        magnitude = float(value)
    except ValueError as exc:
        raise DomainError(f"cannot parse number from {text!r}") from exc
    return Quantity(magnitude, _UNIT_BY_SUFFIX[suffix])


def convert(q: Quantity, target: Unit) -> Quantity:
    """Express ``q`` in ``target`` units.

    Energy-like units (cm^-1, GHz, MHz, K, mK) interconvert through the
    defining constants c and k_B/hc; time units through decimal prefixes.
    Raises :class:`IncompatibleUnits` across dimension classes.
    """
    if q.unit is target:
        return q
    dim_from = _dimension(q.unit)
    dim_to = _dimension(target)
    if dim_from != dim_to or dim_from == "dimensionless":
        raise IncompatibleUnits(
            f"cannot convert {q.unit.value or 'dimensionless'} "
            f"to {target.value or 'dimensionless'}"
        )
    table = _ENERGY_TO_CM1 if dim_from == "energy" else _TIME_TO_PS
    return Quantity(q.magnitude * table[q.unit] / table[target], target)


def wavenumber(value: float) -> Quantity:
    return Quantity(value, Unit.WAVENUMBER_CM1)


def kelvin(value: float) -> Quantity:
    return Quantity(value, Unit.TEMPERATURE_K)


def picoseconds(value: float) -> Quantity:
    return Quantity(value, Unit.TIME_PS)


def thermal_wavenumber(T: Quantity) -> float:
    """k_B*T expressed as a wavenumber (cm^-1)."""
    t_kelvin = convert(T, Unit.TEMPERATURE_K).magnitude
    if t_kelvin <= 0.0:
        raise DomainError(f"temperature must be positive, got {t_kelvin} K")
    return KB_CM1_PER_K * t_kelvin


def bose_occupation(omega: Quantity, T: Quantity) -> float:
    """Mean thermal occupation 1/(exp(hbar*omega/k_B*T) - 1)."""
    omega_cm1 = convert(omega, Unit.WAVENUMBER_CM1).magnitude
    if omega_cm1 <= 0.0:
        raise DomainError(f"omega must be positive, got {omega_cm1} cm^-1")
    x = omega_cm1 / thermal_wavenumber(T)
    return 1.0 / math.expm1(x)


@dataclass(frozen=True)
class ScaleMap:
    """Molecule-to-simulator scaling derived from the quantum-beating time.

    ``s`` is the ratio simulator beating time / molecular beating time.
    Energies, temperatures and rates shrink by 1/s; times stretch by s.
    """

    scale_factor: float

    def inverse(self) -> "ScaleMap":
        return ScaleMap(1.0 / self.scale_factor)


def scale_map_from_beats(tau_mol: Quantity, tau_sim: Quantity) -> ScaleMap:
    """Scale factor from the molecular and simulator beating timescales."""
    t_mol = convert(tau_mol, Unit.TIME_PS).magnitude
    t_sim = convert(tau_sim, Unit.TIME_PS).magnitude
    if t_mol <= 0.0 or t_sim <= 0.0:
        raise DomainError("beating times must be strictly positive")
    return ScaleMap(t_sim / t_mol)


def apply_scale(q: Quantity, m: ScaleMap) -> Quantity:
    """Scale a quantity to the other side of the molecule/simulator map.

    The unit tag is preserved; convert() afterwards for display units.
    """
    dim = _dimension(q.unit)
    if dim == "energy":
        return Quantity(q.magnitude / m.scale_factor, q.unit)
    if dim == "time":
        return Quantity(q.magnitude * m.scale_factor, q.unit)
    raise IncompatibleUnits("dimensionless quantities have no scaling class")
