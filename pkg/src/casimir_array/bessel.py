"""Integer-order Bessel functions, vector-Bessel mode fields and the
finite-radius radial integrals used by the spinning-phase spectrum.

Bessel functions are evaluated with Miller's backward recurrence,
normalised through ``J0 + 2 sum_k J_2k = 1``.  A single recurrence pass
yields every order ``0..M`` at once, which is what the spinning pipeline
needs: the ``(kappa, y)`` grids are shared by all angular-momentum channels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import ConvergenceError, gauss_panels

_RESCALE_AT = 1e250
_RESCALE_BY = 1e-250


def _start_order(max_order: int, xmax: float) -> int:
    # J_n(x) is below 1e-17 of its peak once n exceeds x by ~12 x^(1/3)
    n = max(max_order, xmax) + 20.0 + 12.0 * xmax ** (1.0 / 3.0)
    n = int(math.ceil(n))
    return n + (n % 2)


def bessel_j_table(max_order: int, x) -> np.ndarray:
    """Return ``J_n(x)`` for ``n = 0..max_order`` stacked on a new leading axis."""
    x = np.asarray(x, dtype=float)
    max_order = int(max_order)
    if max_order < 0:
        raise ValueError("max_order must be non-negative")
    shape = x.shape
    ax = np.abs(x).ravel()
    out = np.zeros((max_order + 1, ax.size))
    if ax.size == 0:
        return out.reshape((max_order + 1,) + shape)
    at_origin = ax == 0.0
    xs = np.where(at_origin, 1.0, ax)
    top = _start_order(max_order, float(xs.max()))
    two_over_x = 2.0 / xs

    upper = np.zeros_like(xs)        # J_{n+1}
    cur = np.full_like(xs, 1e-30)    # J_n, arbitrary seed
    total = 2.0 * cur if top % 2 == 0 else np.zeros_like(xs)
    for n in range(top, 0, -1):
        lower = n * two_over_x * cur - upper
        k = n - 1
        if k <= max_order:
            out[k] = lower
        if k == 0:
            total = total + lower
        elif k % 2 == 0:
            total = total + 2.0 * lower
        upper, cur = cur, lower
        big = np.abs(cur) > _RESCALE_AT
        if big.any():
            cur = np.where(big, cur * _RESCALE_BY, cur)
            upper = np.where(big, upper * _RESCALE_BY, upper)
            total = np.where(big, total * _RESCALE_BY, total)
            out[:, big] *= _RESCALE_BY
    out /= total
    if at_origin.any():
        out[:, at_origin] = 0.0
        out[0, at_origin] = 1.0
    negative = (x.ravel() < 0)
    if negative.any():
        odd = np.arange(max_order + 1) % 2 == 1
        out[np.ix_(odd, negative)] *= -1.0
    return out.reshape((max_order + 1,) + shape)


def table_order(table: np.ndarray, n: int) -> np.ndarray:
    """Pick order ``n`` (possibly negative) out of a :func:`bessel_j_table`."""
    if n >= 0:
        return table[n]
    return table[-n] if n % 2 == 0 else -table[-n]


def bessel_j(m: int, x):
    """Bessel function of the first kind ``J_m(x)`` for integer ``m`` and real ``x``."""
    if int(m) != m:
        raise ValueError("only integer orders are supported")
    m = int(m)
    table = bessel_j_table(abs(m), x)
    val = table_order(table, m)
    return val if np.ndim(val) else float(val)


def bessel_j_derivative(m: int, x):
    """``dJ_m/dx`` via ``(J_{m-1} - J_{m+1}) / 2``."""
    return 0.5 * (np.asarray(bessel_j(m - 1, x)) - np.asarray(bessel_j(m + 1, x)))


@dataclass(frozen=True)
class BesselMode:
    """Vector-Bessel photon mode: transverse momentum ``k``, axial momentum
    ``kz``, transverse-spin sign ``eta`` and total angular momentum ``m``."""

    k: float
    kz: float
    eta: int
    m: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("transverse momentum must be non-negative")
        if self.eta not in (1, -1):
            raise ValueError("eta must be +1 or -1")
        if int(self.m) != self.m:
            raise ValueError("m must be an integer")
        if self.omega <= 0:
            raise ValueError("mode frequency must be positive")

    @property
    def omega(self) -> float:
        return math.hypot(self.k, self.kz)


MODE_NORM = 1.0 / (math.sqrt(2.0) * 2.0 * math.pi)


def bessel_mode_field(mode: BesselMode, rho, phi=0.0, z=0.0) -> np.ndarray:
    """Cylindrical components ``(E_rho, E_phi, E_z)`` of a vector-Bessel mode.

    Returns a complex array of shape ``(3,) + broadcast(rho, phi, z).shape``.
    The normalisation is the delta-function one, ``int E.E* d^3r =
    delta(k-k')/k delta(kz-kz')``.
    """
    rho, phi, z = np.broadcast_arrays(np.asarray(rho, float), np.asarray(phi, float),
                                      np.asarray(z, float))
    K = mode.omega
    a = (mode.kz + mode.eta * K) / (2.0 * K)
    b = (mode.kz - mode.eta * K) / (2.0 * K)
    x = mode.k * rho
    j_lo = np.asarray(bessel_j(mode.m - 1, x))
    j_mid = np.asarray(bessel_j(mode.m, x))
    j_hi = np.asarray(bessel_j(mode.m + 1, x))
    phase = MODE_NORM * np.exp(1j * (mode.kz * z + mode.m * phi))
    e_rho = 1j * phase * (a * j_lo - b * j_hi)
    e_phi = -phase * (a * j_lo + b * j_hi)
    e_z = phase * (mode.k / K) * j_mid
    return np.stack([e_rho, e_phi, e_z])


# ---------------------------------------------------------------------------
# radial integrals


def radial_grid(radius: float, max_frequency: float, npts: int = 16, refine: int = 0):
    """Composite Gauss-Legendre nodes on ``[0, radius]`` with panels no longer
    than a quarter period of an oscillation of angular frequency
    ``max_frequency``.  ``refine`` halves the panel length that many times."""
    quarter = 0.5 * math.pi / max_frequency if max_frequency > 0 else radius
    panels = max(1, int(math.ceil(radius / quarter))) * 2**refine
    return gauss_panels(0.0, radius, panels, npts)


def _moment_matrix(table_a, table_b, weights):
    return (table_a * weights) @ table_b.T


@dataclass(frozen=True)
class RadialIntegralSet:
    """The nine finite-radius integrals for one ``(m, ell, kappa, kappa')``.

    ``error`` is the largest change seen when halving the panel length.
    """

    m: int
    ell: int
    kappa: float
    kappa_prime: float
    radius: float
    h_plus: float
    h_minus: float
    h_zero: float
    i_plus: float
    i_minus: float
    j_plus: float
    j_minus: float
    k_plus: float
    k_minus: float
    error: float
    panels: int

    def values(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in
                ("h_plus", "h_minus", "h_zero", "i_plus", "i_minus",
                 "j_plus", "j_minus", "k_plus", "k_minus")}


def radial_integral_matrices(m: int, ell: int, kappa, kappa_prime, y, wy,
                             table=None, table_prime=None) -> dict[str, np.ndarray]:
    """All nine integrals on the outer product of ``kappa`` and ``kappa_prime``.

    ``y, wy`` is a quadrature rule on ``[0, R]``.  Precomputed Bessel tables
    (orders ``0..M`` evaluated on ``kappa x y`` and ``kappa_prime x y``) can
    be passed to share work between angular-momentum channels.
    """
    kappa = np.atleast_1d(np.asarray(kappa, float))
    kappa_prime = np.atleast_1d(np.asarray(kappa_prime, float))
    orders = max(abs(m) + 1, abs(m - ell) + 1)
    if table is None:
        table = bessel_j_table(orders, np.multiply.outer(kappa, y))
    if table_prime is None:
        table_prime = bessel_j_table(orders, np.multiply.outer(kappa_prime, y))

    def first(n):
        return table_order(table, n)

    def second(n):
        return table_order(table_prime, n)

    sign = -1.0 if (m - ell) % 2 else 1.0
    w1 = wy * y
    w0 = wy
    n2 = m - ell
    return {
        "h_minus": -sign * _moment_matrix(first(m - 1), second(n2 - 1), w1),
        "h_plus": -sign * _moment_matrix(first(m + 1), second(n2 + 1), w1),
        "h_zero": sign * _moment_matrix(first(m), second(n2), w1),
        "i_minus": -sign * _moment_matrix(first(m - 1), second(n2 + 1), w1),
        "i_plus": -sign * _moment_matrix(first(m + 1), second(n2 - 1), w1),
        "j_minus": -sign * _moment_matrix(first(m), second(n2 + 1), w0),
        "j_plus": -sign * _moment_matrix(first(m), second(n2 - 1), w0),
        "k_minus": sign * _moment_matrix(first(m - 1), second(n2), w0),
        "k_plus": sign * _moment_matrix(first(m + 1), second(n2), w0),
    }


def radial_integrals(m: int, ell: int, kappa: float, kappa_prime: float,
                     radius: float, tol: float = 1e-9, npts: int = 16,
                     max_refine: int = 6) -> RadialIntegralSet:
    """Evaluate the nine radial integrals with a panel-halving accuracy check.

    Panels start at a quarter period of ``kappa + kappa_prime``; each
    refinement halves them until two successive results agree to ``tol``
    relative to the largest integral.
    """
    if kappa < 0 or kappa_prime < 0:
        raise ValueError("transverse momenta must be non-negative")
    if radius < 0:
        raise ValueError("radius must be non-negative")
    names = ("h_plus", "h_minus", "h_zero", "i_plus", "i_minus",
             "j_plus", "j_minus", "k_plus", "k_minus")
    if radius == 0:
        return RadialIntegralSet(m, ell, kappa, kappa_prime, radius,
                                 *([0.0] * 9), error=0.0, panels=0)
    freq = kappa + kappa_prime

    def evaluate(level):
        y, wy = radial_grid(radius, freq, npts, level)
        mats = radial_integral_matrices(m, ell, [kappa], [kappa_prime], y, wy)
        return np.array([mats[n][0, 0] for n in names]), y.size // npts

    prev, _ = evaluate(0)
    for level in range(1, max_refine + 1):
        cur, panels = evaluate(level)
        err = float(np.max(np.abs(cur - prev)))
        scale = float(np.max(np.abs(cur)))
        if err <= tol * scale or err <= 1e-15 * radius**2:
            return RadialIntegralSet(m, ell, kappa, kappa_prime, radius,
                                     *map(float, cur), error=err, panels=panels)
        prev = cur
    raise ConvergenceError(
        f"radial integrals did not converge (m={m}, ell={ell}, kappa={kappa}, "
        f"kappa'={kappa_prime}, R={radius}): last change {err:.3e} with {panels} panels")


def lommel_integral(order: int, kappa: float, kappa_prime: float, radius: float) -> float:
    """Closed form of ``int_0^R y J_n(kappa y) J_n(kappa' y) dy``.

    Off the diagonal this is Lommel's formula; when
    ``|kappa - kappa'| < 1e-8 max(kappa, kappa')`` the diagonal limit
    ``R^2/2 [J_n'(kR)^2 + (1 - n^2/(kR)^2) J_n(kR)^2]`` is used instead.
    """
    n = order
    R = radius
    top = max(kappa, kappa_prime)
    if top == 0.0:
        return 0.5 * R * R if n == 0 else 0.0
    if abs(kappa - kappa_prime) < 1e-8 * top:
        k = 0.5 * (kappa + kappa_prime)
        x = k * R
        jn = bessel_j(n, x)
        dj = float(bessel_j_derivative(n, x))
        return 0.5 * R * R * (dj * dj + (1.0 - (n / x) ** 2) * jn * jn)
    if min(kappa, kappa_prime) == 0.0:
        # one factor is J_n(0); only n = 0 survives: int y J_0(ky) = R J_1(kR)/k
        return R * bessel_j(1, top * R) / top if n == 0 else 0.0
    a, b = kappa * R, kappa_prime * R
    num = (kappa_prime * bessel_j(n, a) * float(bessel_j_derivative(n, b))
           - kappa * float(bessel_j_derivative(n, a)) * bessel_j(n, b))
    return R * num / (kappa**2 - kappa_prime**2)


def lommel_h_integrals(m: int, kappa: float, kappa_prime: float, radius: float) -> dict[str, float]:
    """Closed forms of ``H+``, ``H-`` and ``H0`` at ``ell = 0`` including the sign prefactors."""
    sign = -1.0 if m % 2 else 1.0
    return {
        "h_plus": -sign * lommel_integral(m + 1, kappa, kappa_prime, radius),
        "h_minus": -sign * lommel_integral(m - 1, kappa, kappa_prime, radius),
        "h_zero": sign * lommel_integral(m, kappa, kappa_prime, radius),
    }


def diagonal_growth_probe(order: int, kappa: float, radii=(50.0, 100.0, 200.0)):
    """Large-radius behaviour of ``int_0^R y J_n(k y)^2 dy``.

    On the diagonal the integral grows like ``R/(pi k)``, the finite-radius
    trace of the delta function in the infinite-range (Weber-Schafheitlin)
    limit.  Returns the ratios ``value / (R/(pi k))`` and their linear
    extrapolation in ``1/R`` to infinite radius.
    """
    radii = np.asarray(radii, float)
    ratios = np.array([lommel_integral(order, kappa, kappa, R) / (R / (math.pi * kappa))
                       for R in radii])
    coef = np.polyfit(1.0 / radii, ratios, 1)
    return ratios, float(coef[-1])
