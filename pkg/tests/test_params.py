import math
import warnings

import pytest

from casimir_array.params import (
    SPEED_OF_LIGHT, CubicLattice, CylindricalStack, LinearKick, ModulationSpec, NoPhase,
    ParameterError, PeriodicMonolayer, Spinning, as_kick_vector, norm_gamma0, norm_r0,
    to_dimensionless,
)

C = SPEED_OF_LIGHT
OMEGA = 2 * math.pi * 10e3


def test_radius_to_dimensionless():
    R = 5 * C / OMEGA
    ctx = to_dimensionless(ModulationSpec(OMEGA, 1e-7, Spinning(2)),
                           CylindricalStack(R, 4e12))
    assert ctx.radius == pytest.approx(5.0, rel=1e-14)
    assert ctx.ell == 2


def test_extent_and_kick_to_dimensionless():
    d = 20 * C / OMEGA / 50
    beta = 0.4 * OMEGA / C
    ctx = to_dimensionless(ModulationSpec(OMEGA, 1e-7, LinearKick((0.0, beta))),
                           CubicLattice(50, 50, 1, d))
    assert ctx.extents[0] == pytest.approx(20.0, rel=1e-13)
    assert ctx.kick_magnitude == pytest.approx(0.4, rel=1e-13)


def test_round_trip():
    spec = ModulationSpec(OMEGA, 1e-7, LinearKick((3e-5, -7e-5)))
    geom = CubicLattice(7, 9, 2, 532e-9)
    ctx = to_dimensionless(spec, geom)
    assert ctx.wavevector_to_si(ctx.kick[0]) == pytest.approx(3e-5, rel=1e-12)
    assert ctx.wavevector_to_si(ctx.kick[1]) == pytest.approx(-7e-5, rel=1e-12)
    assert ctx.length_to_si(ctx.extents[1]) == pytest.approx(9 * 532e-9, rel=1e-12)
    assert ctx.frequency_to_si(0.3) == pytest.approx(0.3 * OMEGA, rel=1e-15)


def test_r0_hand_value():
    spec = ModulationSpec(OMEGA, 100e-9)
    geom = CubicLattice(50, 50, 1, 532e-9)
    # 5.9e-28^2 * (6.283185307e4)^3 * 1e-14 / (16 * 248.050213 * 8.98755179e16 * 6.25e6)
    expected = 3.481e-55 * 2.48050213442e14 * 1e-14 / (16 * 248.0502134423986 * 8.987551787368176e16 * 6.25e6)
    assert norm_r0(spec, geom, 5.9e-28) == pytest.approx(expected, rel=1e-9)


def test_r0_scaling():
    g = CubicLattice(50, 50, 1, 1e-6)
    a = norm_r0(ModulationSpec(OMEGA, 1e-7), g, 5.9e-28)
    assert norm_r0(ModulationSpec(OMEGA, 2e-7), g, 5.9e-28) == pytest.approx(4 * a, rel=1e-14)
    assert norm_r0(ModulationSpec(OMEGA, 1e-7), g, 2 * 5.9e-28) == pytest.approx(4 * a, rel=1e-14)
    with pytest.raises(ParameterError):
        norm_r0(ModulationSpec(OMEGA, 1e-7), PeriodicMonolayer(1e12), 5.9e-28)


def test_gamma0_hand_value_and_scaling():
    spec = ModulationSpec(OMEGA, 100e-9)
    g0 = norm_gamma0(spec, 4e12, 5.9e-28, 50e-12)
    # 50e-12 * 16e24 * 3.481e-55 * OMEGA^7 * 1e-14 / (16 (2 pi)^3 c^6)
    expected = 8e14 * 3.481e-55 * 3.8553e33 * 1e-14 / (3968.803 * 7.2597e50)
    assert g0 == pytest.approx(expected, rel=1e-3)
    assert norm_gamma0(spec, 8e12, 5.9e-28, 50e-12) == pytest.approx(4 * g0, rel=1e-14)
    with pytest.raises(ParameterError):
        norm_gamma0(spec, 4e12, 5.9e-28, 0.0)


def test_validation():
    with pytest.raises(ParameterError):
        ModulationSpec(0.0, 1e-7)
    with pytest.raises(ParameterError):
        ModulationSpec(OMEGA, -1.0)
    with pytest.raises(ParameterError):
        CubicLattice(0, 1, 1, 1.0)
    with pytest.raises(ParameterError):
        Spinning(1.5)
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        ModulationSpec(1e9, 0.1)
    assert any("not small" in str(w.message) for w in rec)
    assert isinstance(ModulationSpec(OMEGA, 0.0).phase, NoPhase)


def test_scalar_kick_along_y():
    assert list(as_kick_vector(0.3)) == [0.0, 0.3]
