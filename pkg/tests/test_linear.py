import math

import numpy as np
import pytest

from casimir_array import linear
from casimir_array.polarization import Pol
from oracles import spectral_oracle


def test_partner_kinematics():
    assert not linear.partner([0.0, 0.0], 0.7, 0.0).evanescent
    smax = 3.0 / 7.0
    th = math.asin(smax)
    k_ok = 0.7 * math.sin(th - 1e-6)
    k_bad = 0.7 * math.sin(th + 1e-6)
    assert not linear.partner([k_ok, 0], 0.7, 0.0).evanescent
    assert linear.partner([k_bad, 0], 0.7, 0.0).evanescent
    assert math.degrees(th) == pytest.approx(25.4, abs=0.05)
    theta = np.linspace(0, math.pi / 2, 50)
    assert linear.allowed_mask(theta, 0.0, 0.3, 0.0).all()
    phi = np.linspace(-math.pi, math.pi, 50)
    tt, pp = np.meshgrid(theta, phi)
    assert not linear.allowed_mask(tt, pp, 0.6, 1.05).any()
    with pytest.raises(ValueError):
        linear.partner([0, 0], 1.0, 0.0)


def test_region_transitions():
    assert linear.emission_region(0.7, 0.1).topology == "cap"
    assert linear.emission_region(0.7, 0.35).topology == "island"
    assert linear.emission_region(0.7, 0.6).topology == "island-grazing"
    assert linear.emission_region(0.3, 0.2).topology == "full"
    r = linear.emission_region(0.7, 1.0)
    assert r.topology == "island-grazing"
    # at the maximal kick only the azimuth of the kick survives, at grazing
    allowed = ~np.isnan(r.theta_min)
    assert np.allclose(r.phi[allowed] - r.kick_angle, 0.0, atol=0.02)
    assert linear.emission_region(0.7, 1.001).topology == "empty"
    crit = linear.analytic_critical_kicks(0.7)
    assert crit["normal_lost"] == pytest.approx(0.3) and crit["grazing_contact"] == pytest.approx(0.4)


def test_density_symmetries():
    theta = np.linspace(0.01, 1.5, 30)
    a = linear.density_f(theta, 0.0, 0.3, 0.0, Pol.TM)
    b = linear.density_f(theta, 2.1, 0.3, 0.0, Pol.TM)
    assert np.allclose(a, b, rtol=1e-13)
    up = linear.density_f(theta, 0.4, 0.7, 0.2, Pol.TE, zeta1=1)
    down = linear.density_f(theta, 0.4, 0.7, 0.2, Pol.TE, zeta1=-1)
    assert np.allclose(up, down, rtol=1e-12)


def test_density_zero_exactly_on_forbidden_set():
    theta = np.linspace(0, math.pi / 2, 61)
    phi = np.linspace(-math.pi, math.pi, 121)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    for pol in (Pol.TE, Pol.TM):
        f = linear.density_f(tt, pp, 0.7, 0.45, pol)
        mask = linear.allowed_mask(tt, pp, 0.7, 0.45)
        assert np.all(f[~mask] == 0.0)
        inner = mask & (tt > 0) & (tt < math.pi / 2)
        assert np.all(f[inner] > 0) if pol == Pol.TM else np.all(f[inner] >= 0)


def test_kick_direction_covariance():
    theta = np.linspace(0.05, 1.4, 20)
    rot = 0.8
    for b in (0.25,):
        f0 = linear.density_f(theta, 0.3, 0.6, [b, 0.0], Pol.TE)
        f1 = linear.density_f(theta, 0.3 + rot, 0.6, [b * math.cos(rot), b * math.sin(rot)], Pol.TE)
        assert np.allclose(f0, f1, rtol=1e-10, atol=1e-14)


def test_lobe_symmetries():
    theta = np.linspace(-math.pi / 2, math.pi / 2, 181)
    for pol in ("TE", "TM"):
        zero = linear.lobes_finite_array(0.0, theta, pol=pol)
        assert np.allclose(zero, zero[::-1], rtol=1e-12)
        plus = linear.lobes_finite_array(0.3, theta, pol=pol)
        minus = linear.lobes_finite_array(-0.3, theta, pol=pol)
        assert np.allclose(plus, minus[::-1], rtol=1e-12)


def test_lobe_tm_above_te():
    theta = np.linspace(-math.pi / 2, math.pi / 2, 2001)
    for kick in (0.1, 0.2, 0.3, 0.4):
        te = linear.lobes_finite_array(kick, theta, pol="TE").max()
        tm = linear.lobes_finite_array(kick, theta, pol="TM").max()
        assert tm > te
    te0 = linear.lobes_finite_array(0.0, theta, pol="TE").max()
    tm0 = linear.lobes_finite_array(0.0, theta, pol="TM").max()
    # both lobes peak on the axis where the two polarizations are equivalent
    assert tm0 == pytest.approx(te0, rel=1e-12)


@pytest.mark.parametrize("u,kick,pol,cross", [
    (0.3, 0.3, "TE", True), (0.65, 0.5, "TM", True), (0.45, 0.0, "TE", True),
    (0.3, 0.4, "TM", False),
])
def test_spectral_rate_matches_oracle(u, kick, pol, cross):
    ref = spectral_oracle(u, kick, pol, cross, epsrel=1e-9)
    got = linear.spectral_rate(u, kick, pol, tol=1e-10, cross_polarized=cross)
    assert got == pytest.approx(ref, rel=1e-8)


def test_spectral_rate_depends_on_kick_modulus():
    a = linear.spectral_rates(0.4, [0.0, 0.35], 1e-11)
    b = linear.spectral_rates(0.4, [0.35 * math.cos(1.1), 0.35 * math.sin(1.1)], 1e-11)
    for c in linear.CHANNELS:
        assert a[c] == pytest.approx(b[c], rel=1e-10)


def test_zero_kick_te_below_tm():
    for u in np.linspace(0.05, 0.95, 10):
        s = linear.spectral_rates(u, 0.0, 1e-10)
        assert s["TE"] < s["TM"]


def test_rates_vanish_beyond_maximal_kick():
    assert linear.total_rate(1.0, "total") == 0.0
    assert linear.spectral_rate(0.5, 1.2, "TM") == 0.0


def test_joint_distribution():
    jd = linear.joint_pair_distribution(0.3, n_omega=32, n_k=96)
    assert jd.density.sum() * jd.cell_volume == pytest.approx(1.0, rel=1e-12)
    assert np.all(jd.density[~jd.allowed] == 0.0)
    # support: both photons propagative in every allowed cell
    uu = jd.u[:, None, None]
    kx, ky = np.meshgrid(jd.kx, jd.ky, indexing="ij")
    k2sq = (jd.kick[0] - kx) ** 2 + (jd.kick[1] - ky) ** 2
    assert np.all(((1 - uu) ** 2 - k2sq[None] > 0)[jd.allowed])
    assert np.all((uu**2 - kx[None] ** 2 - ky[None] ** 2 > 0)[jd.allowed])
    zero = linear.joint_pair_distribution(0.0, n_omega=32, n_k=64)
    assert np.allclose(zero.density, zero.density[::-1, ::-1, ::-1], rtol=1e-10, atol=1e-12)


def test_joint_marginal_follows_spectrum():
    jd = linear.joint_pair_distribution(0.2, n_omega=16, n_k=256)
    marg = jd.frequency_marginal()
    spec = np.array([linear.spectral_rates(u, 0.2, 1e-9) for u in jd.u])
    spec = np.array([s["TE"] + s["TM"] for s in spec])
    spec /= spec.sum() * (jd.u[1] - jd.u[0])
    assert np.allclose(marg, spec, rtol=0.05, atol=0.02 * spec.max())
