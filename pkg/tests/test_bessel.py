import math

import numpy as np
import pytest

from casimir_array.bessel import (
    BesselMode, bessel_j, bessel_j_table, bessel_mode_field, diagonal_growth_probe,
    lommel_h_integrals, lommel_integral, radial_integrals,
)
from oracles import bessel_series


def test_origin_and_reflection():
    assert bessel_j(0, 0.0) == 1.0
    assert all(bessel_j(m, 0.0) == 0.0 for m in (1, 2, -3, 17))
    x = np.linspace(-20, 20, 41)
    assert np.array_equal(bessel_j(-3, x), -bessel_j(3, x))
    assert np.array_equal(bessel_j(-4, x), bessel_j(4, x))


def test_first_zero():
    z = 2.404825557695773
    assert abs(bessel_j(0, z)) < 1e-15
    assert abs(bessel_series(0, z)) < 1e-15


def test_against_series_oracle():
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(150):
        m = int(rng.integers(-60, 61))
        x = float(rng.uniform(-60, 60))
        worst = max(worst, abs(bessel_j(m, x) - bessel_series(m, x)))
    assert worst < 1e-13


def test_large_argument_against_recurrence_identity():
    # the series is impractical near 1e4; check the three-term recurrence and
    # the Neumann sum instead
    x = np.array([137.5, 2.5e3, 9999.9])
    t = bessel_j_table(61, x)
    n = np.arange(1, 61)[:, None]
    resid = t[:-2] + t[2:] - 2 * n / x * t[1:-1]
    assert np.max(np.abs(resid)) < 1e-13
    full = bessel_j_table(int(x.max()) + 200, x)
    s = full[0] ** 2 + 2 * np.sum(full[1:] ** 2, axis=0)
    assert np.allclose(s, 1.0, atol=1e-13)


def test_mode_field_axis_and_winding():
    m0 = BesselMode(0.6, 0.3, 1, 0)
    f0 = bessel_mode_field(m0, 0.0)
    assert abs(f0[2]) > 0
    for m in (1, -2, 3):
        f = bessel_mode_field(BesselMode(0.6, 0.3, -1, m), 0.0)
        if abs(m) == 1:
            assert abs(f[2]) == 0.0
        else:
            assert np.all(np.abs(f) == 0.0)
    mode = BesselMode(0.5, -0.2, 1, 3)
    phi = np.linspace(0, 2 * math.pi, 9)
    f = bessel_mode_field(mode, 1.3, phi)
    assert np.allclose(f[:, 0], f[:, -1])
    assert np.allclose(f, f[:, :1] * np.exp(3j * phi), atol=1e-15)


def test_radial_integrals_vanish_with_radius():
    r = radial_integrals(2, 1, 0.4, 0.3, 1e-4)
    assert max(abs(v) for v in r.values().values()) < 1e-8
    assert all(v == 0 for v in radial_integrals(2, 1, 0.4, 0.3, 0.0).values().values())


def test_lommel_oracle_scipy():
    from scipy import integrate, special
    for n, k1, k2, R in ((0, 0.3, 0.7, 5.0), (3, 1.2, 1.2, 7.0), (2, 0.0, 0.8, 3.0)):
        ref = integrate.quad(lambda y: y * special.jv(n, k1 * y) * special.jv(n, k2 * y),
                             0, R, epsabs=1e-14, epsrel=1e-13, limit=200)[0]
        assert lommel_integral(n, k1, k2, R) == pytest.approx(ref, rel=1e-10, abs=1e-14)


def test_refinement_within_error_estimate():
    r1 = radial_integrals(4, 0, 3.1, 2.2, 15.0, tol=1e-9)
    r2 = radial_integrals(4, 0, 3.1, 2.2, 15.0, tol=5e-10)
    for a, b in zip(r1.values().values(), r2.values().values()):
        assert abs(a - b) <= max(r1.error, 1e-15)


def test_weber_schafheitlin_growth():
    ratios, limit = diagonal_growth_probe(2, 0.7)
    # the diagonal integral approaches R / (pi k) as R grows
    assert limit == pytest.approx(1.0, abs=0.02)
    off = [abs(lommel_integral(2, 0.7, 0.9, R)) for R in (50.0, 100.0, 200.0)]
    assert max(off) < 0.1 * 50.0 / (math.pi * 0.7)


def test_h_integrals_sign_convention():
    closed = lommel_h_integrals(3, 0.5, 0.8, 6.0)
    num = radial_integrals(3, 0, 0.5, 0.8, 6.0)
    assert num.h_zero == pytest.approx(closed["h_zero"], rel=1e-10)
    assert closed["h_zero"] == pytest.approx(-lommel_integral(3, 0.5, 0.8, 6.0), rel=1e-14)
