"""Plane-wave photon modes, TE/TM and circular polarization bases, and the
two-photon coupling amplitude ``W~``.

The array functions (``*_arrays``) work on stacked component arrays and are
what the integrators use; :class:`PlaneWaveMode` and :func:`w_tilde` are the
checked, scalar-level interface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class Pol(str, Enum):
    TE = "TE"
    TM = "TM"
    R = "R"
    L = "L"


LINEAR = (Pol.TE, Pol.TM)
CIRCULAR = (Pol.R, Pol.L)


class OffShellError(ValueError):
    """Raised when a mode violates the vacuum dispersion relation."""


@dataclass(frozen=True)
class PlaneWaveMode:
    """Photon with in-plane wavevector ``k``, signed normal component ``kz``
    and frequency ``omega`` (units ``Omega = c = 1``)."""

    k: tuple[float, float]
    kz: float
    omega: float
    pol: Pol = Pol.TE

    def __post_init__(self):
        object.__setattr__(self, "k", (float(self.k[0]), float(self.k[1])))
        object.__setattr__(self, "pol", Pol(self.pol))

    @classmethod
    def from_direction(cls, omega: float, theta: float, phi: float, pol=Pol.TE):
        """Mode of frequency ``omega`` travelling along polar angle ``theta``
        (from +z) and azimuth ``phi``."""
        s = math.sin(theta)
        return cls((omega * s * math.cos(phi), omega * s * math.sin(phi)),
                   omega * math.cos(theta), omega, pol)

    @property
    def zeta(self) -> int:
        return 1 if self.kz >= 0 else -1

    @property
    def wavevector(self) -> np.ndarray:
        return np.array([self.k[0], self.k[1], self.kz])

    def check_on_shell(self, rtol: float = 1e-12):
        if not self.omega > 0:
            raise OffShellError("mode frequency must be positive")
        k2 = self.k[0] ** 2 + self.k[1] ** 2 + self.kz**2
        if abs(k2 - self.omega**2) > rtol * self.omega**2:
            raise OffShellError(
                f"|K|^2 = {k2!r} differs from omega^2 = {self.omega**2!r}")


def polarization_basis_arrays(kx, ky, kz):
    """TE and TM unit vectors for stacked wavevectors, shape ``(3,) + shape``.

    ``e_TE = K x z / |K x z|`` (``+x`` at normal incidence), ``e_TM = e_TE x K^``.
    """
    kx, ky, kz = np.broadcast_arrays(*(np.asarray(a, float) for a in (kx, ky, kz)))
    kp = np.hypot(kx, ky)
    knorm = np.sqrt(kp * kp + kz * kz)
    normal = kp == 0
    safe = np.where(normal, 1.0, kp)
    te = np.stack([np.where(normal, 1.0, ky / safe),
                   np.where(normal, 0.0, -kx / safe),
                   np.zeros_like(kx)])
    khat = np.stack([kx, ky, kz]) / knorm
    tm = np.cross(te, khat, axis=0)
    return te, tm


def polarization_basis(K):
    """Return ``(e_TE, e_TM)`` for a non-zero 3-vector ``K``."""
    K = np.asarray(K, float)
    if K.shape != (3,):
        raise ValueError("K must be a 3-vector")
    if not np.any(K):
        raise ValueError("polarization basis undefined for a zero wavevector")
    te, tm = polarization_basis_arrays(*K)
    return te, tm


def coupling_arrays(k1, k1z, w1, k2, k2z, w2):
    """``W~`` for every linear polarization pair.

    ``k1``/``k2`` are in-plane components stacked on axis 0 (shape ``(2,...)``),
    ``k1z``/``k2z`` signed normal components and ``w1``/``w2`` frequencies.
    Returns an array of shape ``(2, 2) + shape`` indexed ``[pol1, pol2]`` with
    0 = TE and 1 = TM.
    """
    e1 = polarization_basis_arrays(k1[0], k1[1], k1z)
    e2 = polarization_basis_arrays(k2[0], k2[1], k2z)
    K1 = np.stack([k1[0], k1[1], np.asarray(k1z, float) * np.ones_like(k1[0])])
    K2 = np.stack([k2[0], k2[1], np.asarray(k2z, float) * np.ones_like(k2[0])])
    K1hat = K1 / w1
    K2hat = K2 / w2
    gradient = k1z * (w2 / w1) + k2z * (w1 / w2)
    out = []
    for a in e1:
        row = []
        for b in e2:
            dot = np.sum(a * b, axis=0)
            row.append(gradient * dot
                       - np.sum(K2hat * a, axis=0) * b[2]
                       - np.sum(K1hat * b, axis=0) * a[2])
        out.append(row)
    return np.array(out)


def coupling_inplane(k1x, k1y, k1z, w1, k2x, k2y, k2z, w2):
    """``W~`` for all linear polarization pairs from explicit components.

    Same quantity as :func:`coupling_arrays` with the polarization dot
    products written out, valid for non-zero in-plane wavevectors.  With
    ``d = k1.k2``, ``c = z.(k1 x k2)`` and ``p = |k|``, ``e_TE = (ky, -kx, 0)/p``
    and ``e_TM = (-kx kz, -ky kz, p^2)/(p w)``.
    """
    p1sq = k1x * k1x + k1y * k1y
    p2sq = k2x * k2x + k2y * k2y
    p1 = np.sqrt(p1sq)
    p2 = np.sqrt(p2sq)
    d = k1x * k2x + k1y * k2y
    c = k1x * k2y - k1y * k2x
    g = k1z * (w2 / w1) + k2z * (w1 / w2)
    pp = p1 * p2
    te_te = g * d / pp
    te_tm = c / (p1 * w2) * (g * k2z / p2 + p2 / w2)
    tm_te = -c / (p2 * w1) * (g * k1z / p1 + p1 / w1)
    tm_tm = (g * (k1z * k2z * d + p1sq * p2sq) / (w1 * w2)
             - (k2z * p1sq - k1z * d) * p2sq / (w1 * w2 * w2)
             - (k1z * p2sq - k2z * d) * p1sq / (w1 * w1 * w2)) / pp
    return te_te, te_tm, tm_te, tm_tm


_CIRCULAR_ROWS = {Pol.R: np.array([1.0, 1.0j]) / math.sqrt(2.0),
                  Pol.L: np.array([1.0, -1.0j]) / math.sqrt(2.0)}


def circular_transform(w_linear, pol1=None, pol2=None):
    """Unitary change of basis of linear ``[pol1, pol2]`` amplitudes.

    ``e_R = (e_TE + i e_TM)/sqrt(2)`` and ``e_L = (e_TE - i e_TM)/sqrt(2)``;
    the amplitude is linear (not conjugate-linear) in each polarization
    vector.  ``None`` keeps that photon in the linear basis.
    """
    w = np.asarray(w_linear, complex)
    if pol1 is not None:
        w = np.tensordot(_CIRCULAR_ROWS[Pol(pol1)], w, axes=(0, 0))[None]
    if pol2 is not None:
        w = np.tensordot(_CIRCULAR_ROWS[Pol(pol2)], w, axes=(0, 1))[:, None]
    return w


def _mode_arrays(mode: PlaneWaveMode):
    return (np.array([[mode.k[0]], [mode.k[1]]]), np.array([mode.kz]), mode.omega)


def _index(pol: Pol) -> int:
    if pol == Pol.TE:
        return 0
    if pol == Pol.TM:
        return 1
    raise ValueError("linear polarization (TE or TM) required")


def w_tilde(m1: PlaneWaveMode, m2: PlaneWaveMode) -> float:
    """Two-photon coupling ``W~`` for linearly polarized on-shell modes."""
    m1.check_on_shell()
    m2.check_on_shell()
    i, j = _index(m1.pol), _index(m2.pol)
    k1, k1z, w1 = _mode_arrays(m1)
    k2, k2z, w2 = _mode_arrays(m2)
    return float(coupling_arrays(k1, k1z, w1, k2, k2z, w2)[i, j, 0])


def w_tilde_squared_circular(m1: PlaneWaveMode, m2: PlaneWaveMode, pol1, pol2) -> float:
    """``|W~|^2`` with photon 1 in ``pol1`` and photon 2 in ``pol2``.

    Either polarization may be linear or circular; circular amplitudes are
    obtained from the linear ones by :func:`circular_transform`.
    """
    m1.check_on_shell()
    m2.check_on_shell()
    k1, k1z, w1 = _mode_arrays(m1)
    k2, k2z, w2 = _mode_arrays(m2)
    lin = coupling_arrays(k1, k1z, w1, k2, k2z, w2)[..., 0]
    p1, p2 = Pol(pol1), Pol(pol2)
    c1 = p1 if p1 in CIRCULAR else None
    c2 = p2 if p2 in CIRCULAR else None
    amp = circular_transform(lin, c1, c2)
    i = 0 if c1 is not None else _index(p1)
    j = 0 if c2 is not None else _index(p2)
    return float(abs(amp[i, j]) ** 2)
