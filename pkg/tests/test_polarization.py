import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from casimir_array.polarization import (
    CIRCULAR, OffShellError, PlaneWaveMode, Pol, circular_transform, coupling_arrays,
    coupling_inplane, polarization_basis, w_tilde, w_tilde_squared_circular,
)
from oracles import coupling_oracle

angle = st.floats(0.01, math.pi / 2 - 0.01)
azimuth = st.floats(-math.pi, math.pi)
freq = st.floats(0.05, 0.95)
side = st.sampled_from([1, -1])


def mode(omega, theta, phi, zeta, pol):
    m = PlaneWaveMode.from_direction(omega, theta, phi, pol)
    return PlaneWaveMode(m.k, zeta * m.kz, omega, pol)


def test_normal_incidence_tie_break():
    te, tm = polarization_basis([0, 0, 2.0])
    assert np.allclose(te, [1, 0, 0])
    assert np.allclose(tm, [0, -1, 0])


def test_yz_plane_te_along_x():
    te, _ = polarization_basis([0, 0.3, 0.4])
    assert abs(abs(te[0]) - 1) < 1e-15


def test_zero_vector_rejected():
    with pytest.raises(ValueError):
        polarization_basis([0, 0, 0])


@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_orthonormal(x, y, z):
    K = np.array([x, y, z])
    if np.linalg.norm(K) < 1e-3:
        return
    te, tm = polarization_basis(K)
    khat = K / np.linalg.norm(K)
    for a, b in ((te, te), (tm, tm)):
        assert abs(a @ b - 1) < 1e-14
    for a, b in ((te, tm), (te, khat), (tm, khat)):
        assert abs(a @ b) < 1e-14


def test_on_axis_te_te_value():
    m1 = PlaneWaveMode((0, 0), 0.5, 0.5, Pol.TE)
    m2 = PlaneWaveMode((0, 0), 0.5, 0.5, Pol.TE)
    assert w_tilde(m1, m2) == pytest.approx(1.0, abs=1e-15)


def test_collinear_cross_polarized_vanishes():
    m1 = mode(0.6, 0.5, 0.7, 1, Pol.TE)
    m2 = mode(0.4, 1.1, 0.7, -1, Pol.TM)
    assert abs(w_tilde(m1, m2)) < 1e-15
    m2b = mode(0.4, 1.1, 0.7 + math.pi, 1, Pol.TM)
    assert abs(w_tilde(m1, m2b)) < 1e-15


def test_off_shell_rejected():
    with pytest.raises(OffShellError):
        w_tilde(PlaneWaveMode((0.1, 0), 0.5, 0.5), PlaneWaveMode((0, 0), 0.5, 0.5))


@settings(max_examples=200)
@given(freq, angle, azimuth, side, angle, azimuth, side,
       st.sampled_from(["TE", "TM"]), st.sampled_from(["TE", "TM"]))
def test_matches_oracle_and_exchange(w, t1, p1, z1, t2, p2, z2, a, b):
    m1 = mode(w, t1, p1, z1, a)
    m2 = mode(1 - w, t2, p2, z2, b)
    val = w_tilde(m1, m2)
    ref = coupling_oracle(m1.wavevector, m2.wavevector, a, b)
    assert val == pytest.approx(ref, rel=1e-10, abs=1e-13)
    assert w_tilde(m2, m1) == pytest.approx(val, rel=1e-12, abs=1e-14)


@settings(max_examples=100)
@given(freq, angle, azimuth, side, angle, azimuth, side)
def test_cross_term_positive_for_non_collinear(w, t1, p1, z1, t2, p2, z2):
    m1 = mode(w, t1, p1, z1, "TE")
    m2 = mode(1 - w, t2, p2, z2, "TM")
    cross = m1.k[0] * m2.k[1] - m1.k[1] * m2.k[0]
    if abs(cross) > 1e-3:
        assert w_tilde(m1, m2) ** 2 > 0


@settings(max_examples=100)
@given(freq, angle, azimuth, side, angle, azimuth, side)
def test_circular_basis_consistency(w, t1, p1, z1, t2, p2, z2):
    m1 = mode(w, t1, p1, z1, "TE")
    m2 = mode(1 - w, t2, p2, z2, "TE")
    linear = sum(w_tilde_squared_circular(m1, m2, a, b) for a in "TE TM".split()
                 for b in "TE TM".split())
    circ = sum(w_tilde_squared_circular(m1, m2, a, b) for a in CIRCULAR for b in CIRCULAR)
    assert circ == pytest.approx(linear, rel=1e-10)
    for pol in CIRCULAR:
        partner_sum = sum(w_tilde_squared_circular(m1, m2, pol, b) for b in ("TE", "TM"))
        te_tm = sum(w_tilde_squared_circular(m1, m2, a, b) for a in ("TE", "TM")
                    for b in ("TE", "TM"))
        assert partner_sum == pytest.approx(te_tm / 2, rel=1e-10)


def test_circular_by_hand_normal_incidence():
    # both photons on axis: W~ linear = diag(1, -1) in (TE, TM) for upward pairs
    m1 = PlaneWaveMode((0, 0), 0.5, 0.5)
    m2 = PlaneWaveMode((0, 0), 0.5, 0.5)
    lin = np.array([[w_tilde(PlaneWaveMode((0, 0), 0.5, 0.5, a), PlaneWaveMode((0, 0), 0.5, 0.5, b))
                     for b in ("TE", "TM")] for a in ("TE", "TM")])
    r = np.array([1, 1j]) / math.sqrt(2)
    l_ = np.array([1, -1j]) / math.sqrt(2)
    by_hand = {("R", "R"): abs(r @ lin @ r) ** 2, ("R", "L"): abs(r @ lin @ l_) ** 2}
    for (a, b), v in by_hand.items():
        assert w_tilde_squared_circular(m1, m2, a, b) == pytest.approx(v, abs=1e-15)


def test_fast_kernel_matches_generic():
    rng = np.random.default_rng(3)
    n = 500
    w1 = rng.uniform(0.05, 0.95, n)
    w2 = 1 - w1
    t1, t2 = rng.uniform(0.01, 1.5, (2, n))
    f1, f2 = rng.uniform(-np.pi, np.pi, (2, n))
    z1, z2 = rng.choice([-1, 1], (2, n))
    k1 = np.stack([w1 * np.sin(t1) * np.cos(f1), w1 * np.sin(t1) * np.sin(f1)])
    k2 = np.stack([w2 * np.sin(t2) * np.cos(f2), w2 * np.sin(t2) * np.sin(f2)])
    k1z, k2z = z1 * w1 * np.cos(t1), z2 * w2 * np.cos(t2)
    ref = coupling_arrays(k1, k1z, w1, k2, k2z, w2)
    fast = coupling_inplane(k1[0], k1[1], k1z, w1, k2[0], k2[1], k2z, w2)
    for (i, j), val in zip(((0, 0), (0, 1), (1, 0), (1, 1)), fast):
        assert np.max(np.abs(val - ref[i, j])) < 1e-14


def test_transform_is_unitary():
    w = np.array([[0.3, -1.2], [0.7, 0.4]])
    full = circular_transform(circular_transform(w, "R"), None, None)
    rows = np.vstack([circular_transform(w, p)[0] for p in CIRCULAR])
    assert np.sum(np.abs(rows) ** 2) == pytest.approx(np.sum(w**2), rel=1e-14)
    assert full.shape == (1, 2)
