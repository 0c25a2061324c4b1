"""Laboratory-unit conversions: round trips, scaling laws, pinned constants."""

import math

import pytest

import pairbec as pb
from pairbec.errors import ValidationError

HBAR = 1.054571817e-34
M_E = 9.1093837015e-31
EV = 1.602176634e-19


def test_constants_are_pinned():
    assert pb.CODATA.hbar_js == HBAR
    assert pb.CODATA.electron_mass_kg == M_E
    assert pb.CODATA.electron_volt_j == EV
    assert pb.REFERENCE_PAIR_EXTENT_M == 1e-6


def test_energy_unit_arithmetic():
    d = 3e-8
    assert pb.energy_unit_joules(d) == pytest.approx(HBAR**2 / (2.0 * M_E * d * d), rel=1e-15)
    with pytest.raises(ValidationError):
        pb.energy_unit_joules(0.0)
    with pytest.raises(ValidationError):
        pb.energy_unit_joules(-1e-9)


def test_physical_round_trip():
    d = 2.5e-8
    e = pb.to_physical(18.344, d)
    assert e.electron_volts == e.joules / EV
    back = pb.to_dimensionless(e.joules, d)
    assert back == pytest.approx(18.344, rel=1e-14)


def test_gap_round_trips_both_ways():
    ratio = 0.0706632
    d = pb.d_from_gap(1e-3, ratio)
    assert pb.gap_from_d(d, ratio) == pytest.approx(1e-3, rel=1e-14)
    gap = pb.gap_from_d(4e-8, ratio)
    assert pb.d_from_gap(gap, ratio) == pytest.approx(4e-8, rel=1e-14)


def test_gap_frozen_value_and_formula():
    # a 1 meV gap at full ratio pins the extension scale
    d = pb.d_from_gap(1e-3, 1.0)
    assert d == pytest.approx(2.7423718280201746e-08, rel=1e-14)
    assert d == pytest.approx(math.sqrt(HBAR**2 * math.pi**2 / (M_E * 1e-3 * EV)), rel=1e-15)
    gap = pb.gap_from_d(1e-8, 0.5)
    assert gap == pytest.approx(0.5 * HBAR**2 * math.pi**2 / (M_E * 1e-16) / EV, rel=1e-15)


def test_gap_scales_as_inverse_square_extension():
    ratio = 0.3
    reference = pb.gap_from_d(1e-8, ratio) * (1e-8) ** 2
    for d in (0.5e-8, 1e-8, 2e-8):
        assert pb.gap_from_d(d, ratio) * d * d == pytest.approx(reference, rel=1e-12)


def test_validation():
    for ratio in (0.0, 1.0000001, -0.2, math.nan):
        with pytest.raises(ValidationError):
            pb.gap_from_d(1e-8, ratio)
        with pytest.raises(ValidationError):
            pb.d_from_gap(1e-3, ratio)
    with pytest.raises(ValidationError):
        pb.gap_from_d(0.0, 0.5)
    with pytest.raises(ValidationError):
        pb.d_from_gap(0.0, 0.5)
    assert pb.gap_from_d(1e-8, 1.0) > 0.0


def test_custom_constants_flow_through():
    doubled = pb.PhysicalConstants(
        hbar_js=HBAR, electron_mass_kg=2.0 * M_E, electron_volt_j=EV
    )
    assert pb.energy_unit_joules(1e-8, doubled) == pytest.approx(
        0.5 * pb.energy_unit_joules(1e-8), rel=1e-15
    )
