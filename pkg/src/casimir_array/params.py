"""Physical parameters, unit conventions and normalization constants.

All numerical kernels work in units where ``c = 1`` and ``Omega = 1``:
frequencies are measured in units of the modulation frequency, wavevectors
in ``Omega/c`` and lengths in ``c/Omega``.  SI quantities only appear at the
boundary (this module, :mod:`casimir_array.estimates` and the CLI).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Union

import numpy as np

SPEED_OF_LIGHT = 299792458.0  # m/s, exact


class ParameterError(ValueError):
    """Raised for physically invalid parameter combinations."""


@dataclass(frozen=True)
class NoPhase:
    """All atoms oscillate in phase."""


@dataclass(frozen=True)
class LinearKick:
    """Linear synthetic phase ``beta . R`` imprinting an in-plane momentum.

    ``beta`` is given in rad/m.
    """

    beta: tuple[float, float]

    def __post_init__(self):
        b = tuple(float(x) for x in self.beta)
        if len(b) != 2 or not all(math.isfinite(x) for x in b):
            raise ParameterError("kick must be a finite 2-vector")
        object.__setattr__(self, "beta", b)


@dataclass(frozen=True)
class Spinning:
    """Spinning synthetic phase ``ell * phi`` with integer topological charge."""

    ell: int

    def __post_init__(self):
        if int(self.ell) != self.ell:
            raise ParameterError("topological charge must be an integer")
        object.__setattr__(self, "ell", int(self.ell))


SyntheticPhase = Union[NoPhase, LinearKick, Spinning]


@dataclass(frozen=True)
class ModulationSpec:
    """Oscillation of every atom along z with frequency ``omega_mod`` (rad/s)
    and amplitude ``amplitude`` (m), delayed by a synthetic phase."""

    omega_mod: float
    amplitude: float
    phase: SyntheticPhase = field(default_factory=NoPhase)

    def __post_init__(self):
        if not (self.omega_mod > 0 and math.isfinite(self.omega_mod)):
            raise ParameterError("modulation frequency must be positive")
        if not (self.amplitude >= 0 and math.isfinite(self.amplitude)):
            raise ParameterError("modulation amplitude must be non-negative")
        if self.velocity_ratio > 0.1:
            warnings.warn(
                f"Omega*Delta/c = {self.velocity_ratio:.3g} is not small; "
                "the perturbative rates assume Omega*Delta/c << 1",
                stacklevel=2,
            )

    @property
    def velocity_ratio(self) -> float:
        """Peak atom velocity over c, ``Omega*Delta/c``."""
        return self.omega_mod * self.amplitude / SPEED_OF_LIGHT

    @property
    def length_unit(self) -> float:
        """The internal length unit ``c/Omega`` in metres."""
        return SPEED_OF_LIGHT / self.omega_mod


@dataclass(frozen=True)
class AtomicSpecies:
    """Ground-state static polarizability in volume units (m^3)."""

    alpha0: float

    def __post_init__(self):
        if not self.alpha0 > 0:
            raise ParameterError("polarizability must be positive")


def _check_positive(**values):
    for name, v in values.items():
        if not (v > 0 and math.isfinite(v)):
            raise ParameterError(f"{name} must be positive, got {v!r}")


@dataclass(frozen=True)
class CubicLattice:
    """Finite ``nx x ny x nz`` array with lattice constant ``spacing`` (m)."""

    nx: int
    ny: int
    nz: int
    spacing: float

    def __post_init__(self):
        for name in ("nx", "ny", "nz"):
            n = getattr(self, name)
            if int(n) != n or n < 1:
                raise ParameterError(f"{name} must be a positive integer")
        _check_positive(spacing=self.spacing)

    @property
    def extents(self) -> tuple[float, float, float]:
        d = self.spacing
        return (d * self.nx, d * self.ny, d * self.nz)

    @property
    def atom_count(self) -> int:
        return self.nx * self.ny * self.nz


@dataclass(frozen=True)
class PeriodicMonolayer:
    """Infinite single layer with areal density ``density`` (atoms/m^2)."""

    density: float

    def __post_init__(self):
        _check_positive(density=self.density)


@dataclass(frozen=True)
class CylindricalStack:
    """Disk of radius ``radius`` (m), areal density ``density``, with ``nz``
    layers spaced by ``spacing`` along the spinning axis."""

    radius: float
    density: float
    nz: int = 1
    spacing: float = 1.0

    def __post_init__(self):
        _check_positive(radius=self.radius, density=self.density, spacing=self.spacing)
        if int(self.nz) != self.nz or self.nz < 1:
            raise ParameterError("nz must be a positive integer")

    @property
    def area(self) -> float:
        return math.pi * self.radius**2


ArrayGeometry = Union[CubicLattice, PeriodicMonolayer, CylindricalStack]


@dataclass(frozen=True)
class DimensionlessContext:
    """Parameters expressed in units ``c = Omega = 1``.

    ``kick`` is ``c*beta/Omega`` as a 2-vector, ``radius`` is ``Omega*R/c``
    (zero when the geometry has no radius) and ``extents`` holds the array
    sizes ``Omega*L_i/c``.
    """

    omega_mod: float
    kick: tuple[float, float]
    ell: int | None
    radius: float
    extents: tuple[float, ...]
    spacing: float

    @property
    def kick_magnitude(self) -> float:
        return math.hypot(*self.kick)

    def length_to_si(self, x: float) -> float:
        return x * SPEED_OF_LIGHT / self.omega_mod

    def wavevector_to_si(self, k: float) -> float:
        return k * self.omega_mod / SPEED_OF_LIGHT

    def frequency_to_si(self, u: float) -> float:
        return u * self.omega_mod


def to_dimensionless(spec: ModulationSpec, geom: ArrayGeometry) -> DimensionlessContext:
    """Convert SI inputs to the internal ``c = Omega = 1`` system."""
    if not spec.omega_mod > 0:
        raise ParameterError("modulation frequency must be positive")
    unit = spec.length_unit
    kick = (0.0, 0.0)
    ell = None
    if isinstance(spec.phase, LinearKick):
        kick = (spec.phase.beta[0] * unit, spec.phase.beta[1] * unit)
    elif isinstance(spec.phase, Spinning):
        ell = spec.phase.ell
    radius = 0.0
    extents: tuple[float, ...] = ()
    spacing = 0.0
    if isinstance(geom, CubicLattice):
        extents = tuple(L / unit for L in geom.extents)
        spacing = geom.spacing / unit
    elif isinstance(geom, CylindricalStack):
        radius = geom.radius / unit
        spacing = geom.spacing / unit
        extents = (geom.nz * geom.spacing / unit,)
    elif isinstance(geom, PeriodicMonolayer):
        spacing = 1.0 / math.sqrt(geom.density) / unit
    else:
        raise ParameterError(f"unknown geometry {geom!r}")
    return DimensionlessContext(spec.omega_mod, kick, ell, radius, extents, spacing)


def norm_r0(spec: ModulationSpec, geom: CubicLattice, alpha0: float) -> float:
    """Lobe-rate unit ``alpha0^2 Omega^3 Delta^2 / [16 (2pi)^3 c^2 (Nx Ny Nz)^2]`` in 1/s."""
    if not isinstance(geom, CubicLattice):
        raise ParameterError("r0 is defined for a finite cubic lattice")
    _check_positive(alpha0=alpha0)
    c = SPEED_OF_LIGHT
    n2 = float(geom.nx * geom.ny * geom.nz) ** 2
    return (alpha0**2 * spec.omega_mod**3 * spec.amplitude**2
            / (16.0 * (2 * math.pi) ** 3 * c**2 * n2))


def norm_gamma0(spec: ModulationSpec, density: float, alpha0: float, area: float) -> float:
    """Monolayer rate unit ``Gamma0 = A nS^2 alpha0^2 Omega^7 Delta^2 / [16 (2pi)^3 c^6]`` in 1/s.

    Spectral rates are quoted in ``Gamma0/Omega``.
    """
    _check_positive(density=density, alpha0=alpha0, area=area)
    c = SPEED_OF_LIGHT
    return (area * density**2 * alpha0**2 * spec.omega_mod**7 * spec.amplitude**2
            / (16.0 * (2 * math.pi) ** 3 * c**6))


def as_kick_vector(kick) -> np.ndarray:
    """Accept a scalar (taken along +y) or a 2-vector dimensionless kick."""
    arr = np.atleast_1d(np.asarray(kick, dtype=float))
    if arr.size == 1:
        return np.array([0.0, float(arr[0])])
    if arr.shape != (2,):
        raise ParameterError("kick must be a scalar or a 2-vector")
    return arr
