"""Photon pairs from a disk of atoms whose modulation phase winds ``ell``
times around the axis: angular-momentum spectrum, spectral weight and total
rate.

Units are ``c = Omega = 1``; ``u`` is the frequency of the first photon and
``v = 1 - u`` that of its partner, ``radius`` is the disk radius in units of
``c/Omega``.  The transverse momenta are parameterised as
``kappa = u sin(theta)`` and ``kappa' = v sin(theta')`` so that the measure
``d kappa / |kappa_z|`` becomes ``d theta``; both photons use the same
``theta`` nodes, which makes the pair relabelling ``(u, m) <-> (1-u, ell-m)``
an exact symmetry of the discretisation.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .bessel import RadialIntegralSet, bessel_j_table, radial_grid, radial_integral_matrices
from .form_factors import af2_closed
from .quadrature import _legendre

PAIR_SIGNS = tuple((z, zp, e, ep) for z in (1, -1) for zp in (1, -1)
                   for e in (1, -1) for ep in (1, -1))
# flipping every sign flips every t-term, so half the combinations suffice
_HALF_SIGNS = tuple(s for s in PAIR_SIGNS if s[0] == 1)

TAIL_TOL = 1e-4


class TruncationWarning(UserWarning):
    """The angular-momentum sum was cut before its tail became negligible."""


@dataclass(frozen=True)
class SpinningKinematics:
    """Transverse momenta, signed axial momenta and spin signs of a pair.

    ``kappa_z`` carries the sign ``zeta`` of photon 1 and ``kappa_z_prime``
    that of photon 2.
    """

    u: float
    kappa: float
    kappa_prime: float
    zeta: int
    zeta_prime: int
    eta: int
    eta_prime: int
    m: int
    ell: int
    radius: float

    def __post_init__(self):
        if not 0.0 < self.u < 1.0:
            raise ValueError("u must lie strictly inside (0, 1)")
        if not 0.0 <= self.kappa <= self.u or not 0.0 <= self.kappa_prime <= 1.0 - self.u:
            raise ValueError("transverse momenta outside the propagative domain")
        for s in (self.zeta, self.zeta_prime, self.eta, self.eta_prime):
            if s not in (1, -1):
                raise ValueError("sign labels must be +1 or -1")

    @property
    def kappa_z(self) -> float:
        return self.zeta * math.sqrt(max(self.u**2 - self.kappa**2, 0.0))

    @property
    def kappa_z_prime(self) -> float:
        v = 1.0 - self.u
        return self.zeta_prime * math.sqrt(max(v * v - self.kappa_prime**2, 0.0))

    def swapped(self) -> "SpinningKinematics":
        """The same pair with the photon labels exchanged."""
        return SpinningKinematics(1.0 - self.u, self.kappa_prime, self.kappa,
                                  self.zeta_prime, self.zeta, self.eta_prime, self.eta,
                                  self.ell - self.m, self.ell, self.radius)


def _t_components(u, kap, kz, kp, kpz, eta, eta_p, m, ell, r):
    """The five contributions to the pair amplitude, broadcasting over arrays.

    ``r`` maps integral names (``h_minus`` ... ``k_plus``) to arrays that
    broadcast against ``kap`` and ``kp``.
    """
    v = 1.0 - u
    x = kz * (v / u) + kpz * (u / v)
    a_p, a_m = kz + eta * u, kz - eta * u
    b_p, b_m = kpz + eta_p * v, kpz - eta_p * v
    k2u = kap * kap / (2.0 * u)
    kp2v = kp * kp / (2.0 * v)
    t_a = (x * a_p * b_m + kp2v * a_p + k2u * b_m) * r["h_minus"]
    t_b = (x * b_p * a_m + k2u * b_p + kp2v * a_m) * r["h_plus"]
    t_c = -2.0 * (kz + kpz) * kap * kp * r["h_zero"]
    t_d = (-(kp2v * a_p + k2u * b_p) * r["i_minus"]
           - (kp2v * a_m + k2u * b_m) * r["i_plus"])
    t_e = (m * kap / u * (b_p * r["j_minus"] + b_m * r["j_plus"])
           + (ell - m) * kp / v * (a_p * r["k_minus"] + a_m * r["k_plus"]))
    return t_a, t_b, t_c, t_d, t_e


def t_terms(kin: SpinningKinematics, integrals: RadialIntegralSet):
    """``(t_a, t_b, t_c, t_d, t_e)`` for one pair configuration.

    The integrals must belong to the same ``(m, ell, kappa, kappa')``.
    """
    if (integrals.m, integrals.ell) != (kin.m, kin.ell):
        raise ValueError("radial integrals belong to a different (m, ell)")
    if not (math.isclose(integrals.kappa, kin.kappa, rel_tol=1e-12, abs_tol=1e-15)
            and math.isclose(integrals.kappa_prime, kin.kappa_prime, rel_tol=1e-12,
                             abs_tol=1e-15)):
        raise ValueError("radial integrals belong to different transverse momenta")
    return tuple(float(t) for t in _t_components(
        kin.u, kin.kappa, kin.kappa_z, kin.kappa_prime, kin.kappa_z_prime,
        kin.eta, kin.eta_prime, kin.m, kin.ell, integrals.values()))


def default_theta_nodes(radius: float) -> int:
    """Gauss nodes per photon; the integrand varies on a scale ``1/radius``."""
    return int(max(48, 8 * math.ceil(1.5 * radius)))


@dataclass
class _SpectrumGrid:
    """Nodes, weights and Bessel tables shared by every ``m`` at one ``u``."""

    u: float
    ell: int
    radius: float
    max_order: int
    n_theta: int
    refine: int = 0
    stack: tuple | None = None

    def __post_init__(self):
        v = 1.0 - self.u
        x, w = _legendre(self.n_theta)
        theta = 0.25 * math.pi * (x + 1.0)
        wt = 0.25 * math.pi * w
        s, c = np.sin(theta), np.cos(theta)
        self.kap, self.kz = self.u * s, self.u * c
        self.kp, self.kpz = v * s, v * c
        self.w1 = wt * self.kap
        self.w2 = wt * self.kp
        # kappa + kappa' <= 1 sets the fastest radial oscillation
        self.y, self.wy = radial_grid(self.radius, 1.0, 16, self.refine)
        self.table = bessel_j_table(self.max_order, np.multiply.outer(self.kap, self.y))
        self.table_prime = bessel_j_table(self.max_order, np.multiply.outer(self.kp, self.y))

    def orders_needed(self, m: int) -> int:
        return max(abs(m), abs(m - self.ell)) + 1

    def f(self, m: int) -> float:
        if self.orders_needed(m) > self.max_order:
            raise ValueError(f"Bessel table too small for m={m}")
        mats = radial_integral_matrices(m, self.ell, self.kap, self.kp, self.y, self.wy,
                                        self.table, self.table_prime)
        u = self.u
        kap, kp = self.kap[:, None], self.kp[None, :]
        kz_abs, kpz_abs = self.kz[:, None], self.kpz[None, :]
        total = 0.0
        for z, zp, e, ep in _HALF_SIGNS:
            terms = _t_components(u, kap, z * kz_abs, kp, zp * kpz_abs, e, ep,
                                  m, self.ell, mats)
            amp = terms[0] + terms[1] + terms[2] + terms[3] + terms[4]
            sq = amp * amp
            if self.stack is not None:
                nz, extent = self.stack
                sq = sq * af2_closed(z * kz_abs + zp * kpz_abs, nz, extent)
            total = total + sq
        return 2.0 * float(self.w1 @ total @ self.w2)


def f_ell_m(omega: float, m: int, ell: int, radius: float, n_theta: int | None = None,
            stack: tuple | None = None) -> float:
    """Angular-momentum spectrum: pair weight with photon 1 carrying ``m``.

    ``f = int int dkappa dkappa' kappa kappa' / (|kappa_z| |kappa_z'|)
    sum_{zeta, zeta', eta, eta'} (t_a + ... + t_e)^2``.  ``stack = (nz,
    extent_z)`` multiplies each ``zeta, zeta'`` term by the stacking form
    factor of ``nz`` layers (``None`` is a single layer).
    """
    u = float(omega)
    if not 0.0 < u < 1.0:
        raise ValueError("frequency must lie strictly between 0 and Omega")
    if radius <= 0:
        raise ValueError("radius must be positive")
    n = n_theta or default_theta_nodes(radius)
    grid = _SpectrumGrid(u, ell, radius, max(abs(m), abs(m - ell)) + 1, n, stack=stack)
    return grid.f(m)


@dataclass
class SpectralWeight:
    """``sum_m f_ell(u, m)`` over the window ``ell - m_max .. ell + m_max``.

    ``density`` is the one-photon spectral rate in ``Gamma0/Omega`` units for
    a disk of area ``pi radius^2``; ``tail`` is the weight in the two
    outermost shells relative to the total.
    """

    u: float
    ell: int
    radius: float
    m_max: int
    values: dict = field(default_factory=dict)
    tail: float = 0.0
    converged: bool = True

    @property
    def total(self) -> float:
        return math.fsum(self.values[m] for m in sorted(self.values))

    @property
    def density(self) -> float:
        return math.pi / (4.0 * self.radius**2) * self.total


def _window_tail(values, ell, m_max):
    shells = [ell - m_max, ell + m_max, ell - m_max + 1, ell + m_max - 1]
    edge = sum(values[m] for m in set(shells))
    total = math.fsum(values.values())
    return edge / total if total > 0 else 0.0


def f_ell(omega: float, ell: int, radius: float, m_max: int | None = None,
          n_theta: int | None = None, stack: tuple | None = None,
          tail_tol: float = TAIL_TOL, max_window: int = 400) -> SpectralWeight:
    """Spectral weight summed over the photon-1 angular momentum.

    With ``m_max`` given the window is fixed and a :class:`TruncationWarning`
    is issued if the tail exceeds ``tail_tol``; otherwise the window grows
    until the two outermost shells hold less than ``tail_tol`` of the total.
    """
    u = float(omega)
    if not 0.0 < u < 1.0:
        raise ValueError("frequency must lie strictly between 0 and Omega")
    floor = abs(ell) + 5
    if m_max is not None and m_max < floor:
        raise ValueError(f"m_max must be at least |ell| + 5 = {floor}")
    n = n_theta or default_theta_nodes(radius)
    fixed = m_max is not None
    window = m_max if fixed else max(floor, int(math.ceil(radius)) + abs(ell))
    values: dict[int, float] = {}
    grid = None
    while True:
        need = window + abs(ell) + 1
        if grid is None or grid.max_order < need:
            grid = _SpectrumGrid(u, ell, radius, need + 8, n, stack=stack)
        for m in range(ell - window, ell + window + 1):
            if m not in values:
                values[m] = grid.f(m)
        tail = _window_tail(values, ell, window)
        if fixed or tail < tail_tol:
            break
        if window >= max_window:
            break
        window += max(4, window // 4)
    converged = tail < tail_tol
    if not converged:
        warnings.warn(f"angular-momentum tail {tail:.2e} at m_max={window} "
                      f"(u={u}, ell={ell}, radius={radius})", TruncationWarning,
                      stacklevel=2)
    return SpectralWeight(u, ell, radius, window, values, tail, converged)


@dataclass
class AngularMomentumSpectrum:
    """``f_ell(u, m)`` on a grid of frequencies (rows) and ``m`` (columns)."""

    ell: int
    radius: float
    omegas: np.ndarray
    ms: np.ndarray
    values: np.ndarray
    m_max: int
    tail: np.ndarray


def angular_momentum_spectrum(omegas, ell: int, radius: float, m_max: int,
                              n_theta: int | None = None, mapper=map) -> AngularMomentumSpectrum:
    """Evaluate the spectrum on a frequency grid with a fixed ``m`` window.

    ``mapper`` is an order-preserving map (the built-in one, or a process
    pool's) so the result does not depend on how the work is distributed.
    """
    omegas = np.asarray(omegas, float)
    jobs = [(float(u), ell, radius, m_max, n_theta) for u in omegas]
    results = list(mapper(_weight_job, jobs))
    ms = np.arange(ell - m_max, ell + m_max + 1)
    values = np.array([[r.values[int(m)] for m in ms] for r in results])
    tail = np.array([r.tail for r in results])
    return AngularMomentumSpectrum(ell, radius, omegas, ms, values, m_max, tail)


def _weight_job(args):
    u, ell, radius, m_max, n_theta = args
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        return f_ell(u, ell, radius, m_max=m_max, n_theta=n_theta)


@dataclass
class SpinningRate:
    """Pair emission rate ``Gamma_ell / Gamma0`` for a disk of area ``pi R^2``."""

    ell: int
    radius: float
    value: float
    error: float
    nodes: int
    max_tail: float
    spectrum: list = field(default_factory=list)

    def si(self, gamma0: float) -> float:
        """Rate in photon pairs per second given ``Gamma0`` for the same disk."""
        return self.value * gamma0


def total_rate_spinning(ell: int, radius: float, nodes: int = 12,
                        n_theta: int | None = None, tail_tol: float = TAIL_TOL,
                        mapper=map) -> SpinningRate:
    """``Gamma_ell / Gamma0 = pi/(8 R^2) int_0^1 du sum_m f_ell(u, m)``.

    Pair relabelling makes ``sum_m f`` symmetric about ``u = 1/2``, so the
    frequency integral is a Gauss rule on ``(0, 1/2)`` doubled.  The error
    estimate is the difference to the integral of a polynomial of half the
    degree fitted through the same samples.
    """
    x, w = _legendre(nodes)
    us = 0.25 * (x + 1.0)
    wu = 0.25 * w
    jobs = [(float(u), ell, radius, tail_tol, n_theta) for u in us]
    weights = list(mapper(_adaptive_job, jobs))
    sums = np.array([r.total for r in weights])
    value = 2.0 * math.pi / (8.0 * radius**2) * float(wu @ sums)
    # embedded check: a Gauss rule of half the order, interpolated through the same samples
    coarse = _interpolated_rule(us, sums, nodes // 2)
    coarse_value = 2.0 * math.pi / (8.0 * radius**2) * coarse
    return SpinningRate(ell, radius, value, abs(value - coarse_value), nodes,
                        max(r.tail for r in weights), weights)


def _adaptive_job(args):
    u, ell, radius, tail_tol, n_theta = args
    return f_ell(u, ell, radius, n_theta=n_theta, tail_tol=tail_tol)


def _interpolated_rule(us, values, order):
    # integrate the degree-(order-1) least-squares polynomial through the samples
    t = 4.0 * us - 1.0
    coef = np.polynomial.legendre.legfit(t, values, order - 1)
    return 0.25 * 2.0 * coef[0]


def radius_extrapolation(radii, values, order: int = 1):
    """Extrapolate finite-radius results to infinite radius.

    Fits ``value(R) = a0 + a1/R + ... + a_order/R^order`` through the given
    points (at least ``order + 1``) and returns ``a0`` together with the
    fitted coefficients.
    """
    radii = np.asarray(radii, float)
    values = np.asarray(values, float)
    if radii.size < order + 1:
        raise ValueError("need at least order + 1 radii")
    coef = np.polynomial.polynomial.polyfit(1.0 / radii, values, order)
    return float(coef[0]), coef


@dataclass(frozen=True)
class Af3Structure:
    """Selection rule of the spinning form factor for a photon pair."""

    m1: int
    m2: int
    ell: int

    @property
    def allowed(self) -> bool:
        return self.m1 + self.m2 == self.ell

    @property
    def partner_m(self) -> int:
        """The only partner angular momentum allowed for ``m1``."""
        return self.ell - self.m1


def af3_conservation(m1: int, m2: int, ell: int) -> Af3Structure:
    """Angular momenta of a pair must add up to the winding of the phase."""
    for n in (m1, m2, ell):
        if int(n) != n:
            raise ValueError("angular momenta must be integers")
    return Af3Structure(int(m1), int(m2), int(ell))
