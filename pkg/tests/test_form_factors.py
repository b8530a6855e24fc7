import math

import numpy as np
import pytest

from casimir_array.form_factors import (
    af1_closed, af2_closed, af_discrete_oracle, lattice_momentum_rule,
)


def closed(dk, nx, ny, nz, d):
    return float(af1_closed(dk[:2], nx, ny, d) * af2_closed(dk[2], nz, nz * d))


def test_small_cases_against_atom_sum():
    rng = np.random.default_rng(11)
    for _ in range(200):
        nx, ny, nz = rng.integers(1, 8, 3)
        d = rng.uniform(0.2, 3.0)
        dk = rng.uniform(-5, 5, 3)
        ref = af_discrete_oracle(dk, nx, ny, nz, d)
        assert closed(dk, nx, ny, nz, d) == pytest.approx(ref, rel=1e-9, abs=1e-9 * (nx * ny * nz) ** 2)


def test_peak_values_exact():
    assert af1_closed(np.zeros(2), 20, 13, 0.7) == 20.0**2 * 13.0**2
    assert af2_closed(0.0, 5, 3.5) == 25.0
    g = 2 * math.pi / 0.7
    assert af1_closed(np.array([g, -2 * g]), 20, 13, 0.7) == pytest.approx(400 * 169, rel=1e-12)


def test_near_singularity_is_smooth():
    x = np.array([-2e-6, -1e-6, -5e-7, 0.0, 5e-7, 1e-6, 2e-6])
    vals = af2_closed(x, 7, 7.0)
    ref = [af_discrete_oracle([0, 0, xi], 1, 1, 7, 1.0) for xi in x]
    assert np.allclose(vals, ref, rtol=1e-12)


def test_monolayer_af2_is_one():
    assert np.all(af2_closed(np.linspace(-3, 3, 7), 1, 1.0) == 1.0)


def test_momentum_rule():
    d = 0.5
    g = 2 * math.pi / d
    ok = lattice_momentum_rule([0.1, 0.2], [0.2, -0.1], [0.3, 0.1], d)
    assert ok.satisfied_q0 and ok.propagative
    recoil = lattice_momentum_rule([0.1, 0.2], [0.2 + g, -0.1], [0.3, 0.1], d)
    assert recoil.on_lattice and recoil.order == (1, 0) and not recoil.propagative
    off = lattice_momentum_rule([0.1, 0.2], [0.2, 0.0], [0.3, 0.1], d)
    assert not off.on_lattice
