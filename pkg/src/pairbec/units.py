"""Conversion between dimensionless pair energies and laboratory units.

Energies inside the solver are measured in hbar^2 / (2 m_e d^2), where d is
the physical extension of the pair in meters. The binding gap in these units
is gap_ratio * 2 pi^2 with gap_ratio the dimensionless gap over the
threshold, so in electron volts

    gap = gap_ratio * hbar^2 pi^2 / (m_e d^2) / e,

which inverts to d = sqrt(gap_ratio * hbar^2 pi^2 / (m_e * gap_J)).
"""

from __future__ import annotations

from dataclasses import dataclass

import math

from .errors import ValidationError


@dataclass(frozen=True)
class PhysicalConstants:
    """The three constants the conversions need, in SI units.

    Defaults are the 2018 CODATA exact or recommended values.
    """

    hbar_js: float = 1.054571817e-34
    electron_mass_kg: float = 9.1093837015e-31
    electron_volt_j: float = 1.602176634e-19


CODATA = PhysicalConstants()


@dataclass(frozen=True)
class PhysicalEnergy:
    """One energy in both laboratory scales."""

    joules: float
    electron_volts: float


def energy_unit_joules(pair_extent_m: float, constants: PhysicalConstants = CODATA) -> float:
    """The solver's energy unit hbar^2 / (2 m_e d^2) for pair extension d."""
    if not pair_extent_m > 0.0:
        raise ValidationError(f"pair extension must be positive, got {pair_extent_m!r}")
    return constants.hbar_js**2 / (2.0 * constants.electron_mass_kg * pair_extent_m**2)


def to_physical(
    energy_dimless: float,
    pair_extent_m: float,
    constants: PhysicalConstants = CODATA,
) -> PhysicalEnergy:
    """Express a dimensionless energy in joules and electron volts."""
    unit = energy_unit_joules(pair_extent_m, constants)
    joules = energy_dimless * unit
    return PhysicalEnergy(joules=joules, electron_volts=joules / constants.electron_volt_j)


def to_dimensionless(
    energy_j: float,
    pair_extent_m: float,
    constants: PhysicalConstants = CODATA,
) -> float:
    """Inverse of :func:`to_physical` on the joule component."""
    return energy_j / energy_unit_joules(pair_extent_m, constants)


def gap_from_d(
    pair_extent_m: float,
    gap_ratio: float,
    constants: PhysicalConstants = CODATA,
) -> float:
    """Physical binding gap in eV for a pair of extension d meters.

    gap_ratio is the dimensionless gap divided by the threshold 2 pi^2,
    in (0, 1].
    """
    _check_ratio(gap_ratio)
    if not pair_extent_m > 0.0:
        raise ValidationError(f"pair extension must be positive, got {pair_extent_m!r}")
    c = constants
    return (
        gap_ratio
        * c.hbar_js**2
        * math.pi**2
        / (c.electron_mass_kg * pair_extent_m**2)
        / c.electron_volt_j
    )


def d_from_gap(
    gap_ev: float,
    gap_ratio: float,
    constants: PhysicalConstants = CODATA,
) -> float:
    """Pair extension in meters that produces a given binding gap in eV."""
    _check_ratio(gap_ratio)
    if not gap_ev > 0.0:
        raise ValidationError(f"gap must be positive, got {gap_ev!r}")
    c = constants
    gap_j = gap_ev * c.electron_volt_j
    return math.sqrt(gap_ratio * c.hbar_js**2 * math.pi**2 / (c.electron_mass_kg * gap_j))


def _check_ratio(gap_ratio: float) -> None:
    if not (math.isfinite(gap_ratio) and 0.0 < gap_ratio <= 1.0):
        raise ValidationError(f"gap ratio must lie in (0, 1], got {gap_ratio!r}")


REFERENCE_PAIR_EXTENT_M = 1e-6
"""Textbook order of magnitude for the spatial extension of a weakly
bound electron pair, used for the informational comparison in reports."""
