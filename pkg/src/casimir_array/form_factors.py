"""Array form factors: closed forms, the brute-force atom sum they must
match, and the in-plane momentum rule of an infinite periodic layer.

Wavevectors are in units of ``Omega/c`` and lengths in ``c/Omega``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SINGULAR_WINDOW = 1e-6


def _dirichlet_squared(x, n: int):
    """``sin^2(n x/2) / sin^2(x/2)`` with the removable singularities filled in.

    Near ``x/2 = j*pi`` the ratio is replaced by its expansion
    ``n^2 (1 - (n^2 - 1) eps^2 / 3)`` with ``eps`` the distance to ``j*pi``.
    """
    half = 0.5 * np.asarray(x, float)
    eps = half - np.pi * np.round(half / np.pi)
    near = np.abs(eps) < SINGULAR_WINDOW
    den = np.sin(half)
    safe = np.where(near, 1.0, den)
    ratio = np.sin(n * half) ** 2 / safe**2
    series = n * n * (1.0 - (n * n - 1.0) * eps * eps / 3.0)
    return np.where(near, series, ratio)


def af1_closed(dk_inplane, nx: int, ny: int, spacing: float):
    """In-plane form factor for an ``nx x ny`` layer with lattice constant ``spacing``.

    ``dk_inplane`` has its two components on the leading axis
    (``k1 + k2 - beta``).
    """
    dk = np.asarray(dk_inplane, float)
    return (_dirichlet_squared(dk[0] * spacing, nx)
            * _dirichlet_squared(dk[1] * spacing, ny))


def af2_closed(dk_z, nz: int, extent_z: float):
    """Stacking form factor of ``nz`` layers spanning ``extent_z = nz * d``."""
    if nz == 1:
        return np.ones_like(np.asarray(dk_z, float))
    return _dirichlet_squared(np.asarray(dk_z, float) * (extent_z / nz), nz)


def af_discrete_oracle(dk, nx: int, ny: int, nz: int, spacing: float,
                       origin=(1, 1, 1)) -> float:
    """``|sum_j exp(i dk . R_j)|^2`` summed atom by atom.

    Atoms sit at ``spacing * (mx, my, mz)`` with ``origin[i] <= m_i <
    origin[i] + N_i``.
    """
    total = nx * ny * nz
    if total > 1_000_000:
        raise MemoryError(f"oracle limited to 1e6 atoms, got {total}")
    dk = np.asarray(dk, float)
    idx = [np.arange(o, o + n) for o, n in zip(origin, (nx, ny, nz))]
    gx, gy, gz = np.meshgrid(*idx, indexing="ij")
    phase = spacing * (dk[0] * gx + dk[1] * gy + dk[2] * gz)
    s = np.sum(np.exp(1j * phase.ravel()))
    return float(abs(s) ** 2)


@dataclass(frozen=True)
class ConservationReport:
    residual: tuple[float, float]
    order: tuple[int, int]
    on_lattice: bool
    propagative: bool

    @property
    def satisfied_q0(self) -> bool:
        """True when the pair obeys ``k1 + k2 = beta`` with no lattice recoil."""
        return self.on_lattice and self.order == (0, 0)


def lattice_momentum_rule(k1, k2, beta, spacing: float, tol: float = 1e-9) -> ConservationReport:
    """Check ``k1 + k2 - beta`` against the reciprocal lattice of a square layer.

    A pair recoiling on a non-zero reciprocal vector ``G`` can only be
    propagative if ``|beta + G| <= 1`` (in-plane momenta of the two photons
    add up to at most ``omega1 + omega2 = Omega``).
    """
    q = np.asarray(k1, float) + np.asarray(k2, float) - np.asarray(beta, float)
    g = 2.0 * math.pi / spacing
    order = np.round(q / g)
    on_lattice = bool(np.all(np.abs(q - order * g) <= tol * max(g, 1.0)))
    target = np.asarray(beta, float) + order * g
    propagative = on_lattice and float(np.hypot(*target)) <= 1.0 + tol
    return ConservationReport(tuple(map(float, q)), tuple(int(o) for o in order),
                              on_lattice, propagative)
