"""Order-of-magnitude photon production rates in SI units for a moving
mirror, a modulated atomic meta-mirror and a superconducting-waveguide
analog, plus the deformation limit of acoustically driven surfaces."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

from .params import SPEED_OF_LIGHT, ModulationSpec, ParameterError, norm_gamma0

MAX_RELATIVE_DEFORMATION = 1e-2


def _positive(**values):
    for name, v in values.items():
        if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
            raise ParameterError(f"{name} must be a positive number, got {v!r}")


def mirror_rate(area: float, omega: float, amplitude: float) -> float:
    """Pairs per second from a perfect mirror of area ``area`` (m^2) shaken at
    ``omega`` (rad/s) with amplitude ``amplitude`` (m):
    ``A Omega^5 Delta^2 / (15 (2 pi)^2 c^4)``."""
    _positive(area=area, omega=omega)
    if amplitude < 0:
        raise ParameterError("amplitude must be non-negative")
    c = SPEED_OF_LIGHT
    return area * omega**5 * amplitude**2 / (15.0 * (2.0 * math.pi) ** 2 * c**4)


@lru_cache(maxsize=1)
def zero_kick_coefficient(tol: float = 1e-8) -> float:
    """``Gamma(beta = 0) / Gamma0`` from the monolayer spectral integral."""
    from .linear import total_rates
    return total_rates(0.0, tol).total


def metamirror_rate(area: float, density: float, alpha0: float, omega: float,
                    amplitude: float, coefficient: float | None = None) -> float:
    """Maximal (zero-kick) pair rate of a modulated atomic monolayer, per second.

    The prefactor multiplying ``Gamma0`` is computed from the spectral
    integral unless ``coefficient`` is given.
    """
    _positive(area=area, density=density, alpha0=alpha0, omega=omega)
    if amplitude < 0:
        raise ParameterError("amplitude must be non-negative")
    if amplitude == 0:
        return 0.0
    coef = zero_kick_coefficient() if coefficient is None else coefficient
    gamma0 = norm_gamma0(ModulationSpec(omega, amplitude), density, alpha0, area)
    return coef * gamma0


def waveguide_rate(omega: float, velocity_ratio: float) -> float:
    """Pairs per second of a one-dimensional mirror analog, ``(Omega/12 pi) (v/c)^2``."""
    _positive(omega=omega)
    if not 0.0 <= velocity_ratio < 1.0:
        raise ParameterError("effective velocity must satisfy 0 <= v/c < 1")
    return omega / (12.0 * math.pi) * velocity_ratio**2


@dataclass(frozen=True)
class AcousticBound:
    max_amplitude: float  # m
    max_velocity: float  # m/s


def acoustic_bound(sound_speed: float, acoustic_frequency: float) -> AcousticBound:
    """Largest amplitude and boundary velocity a material surface can sustain
    when driven by an acoustic wave of angular frequency ``acoustic_frequency``."""
    _positive(sound_speed=sound_speed, acoustic_frequency=acoustic_frequency)
    vmax = MAX_RELATIVE_DEFORMATION * sound_speed
    return AcousticBound(vmax / acoustic_frequency, vmax)


class ScenarioKind(str, Enum):
    PERFECT_MIRROR = "PerfectMirror"
    META_MIRROR = "MetaMirror"
    WAVEGUIDE_1D = "Waveguide1D"


_REQUIRED = {
    ScenarioKind.PERFECT_MIRROR: ("area", "omega", "amplitude"),
    ScenarioKind.META_MIRROR: ("area", "omega", "amplitude", "alpha0", "density"),
    ScenarioKind.WAVEGUIDE_1D: ("omega", "velocity_ratio"),
}


@dataclass(frozen=True)
class Scenario:
    """Named SI parameter bundle.  Keys: ``area`` (m^2), ``omega`` (rad/s),
    ``amplitude`` (m), ``alpha0`` (m^3), ``density`` (1/m^2),
    ``velocity_ratio``."""

    name: str
    kind: ScenarioKind
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "kind", ScenarioKind(self.kind))
        missing = [k for k in _REQUIRED[self.kind] if k not in self.parameters]
        if missing:
            raise ParameterError(f"scenario {self.name!r} lacks {', '.join(missing)}")
        for key in _REQUIRED[self.kind]:
            _positive(**{key: self.parameters[key]})

    def rate(self) -> float:
        p = self.parameters
        if self.kind is ScenarioKind.PERFECT_MIRROR:
            return mirror_rate(p["area"], p["omega"], p["amplitude"])
        if self.kind is ScenarioKind.META_MIRROR:
            return metamirror_rate(p["area"], p["density"], p["alpha0"], p["omega"],
                                   p["amplitude"])
        return waveguide_rate(p["omega"], p["velocity_ratio"])


TWO_PI = 2.0 * math.pi

BUILTIN_SCENARIOS = {
    "mirror": Scenario("mirror", ScenarioKind.PERFECT_MIRROR, {
        "area": 1e-4, "omega": TWO_PI * 1e6, "amplitude": 100e-9}),
    "rb87": Scenario("rb87", ScenarioKind.META_MIRROR, {
        "area": 50e-12, "omega": TWO_PI * 10e3, "amplitude": 100e-9,
        "alpha0": 5.9e-28, "density": 4e12}),
    "waveguide": Scenario("waveguide", ScenarioKind.WAVEGUIDE_1D, {
        "omega": TWO_PI * 11e9, "velocity_ratio": 0.05}),
}


def load_scenarios(path) -> dict[str, Scenario]:
    """Read user scenarios from a JSON file: a list of
    ``{"name": ..., "kind": ..., "parameters": {...}}`` objects."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if isinstance(doc, dict):
        doc = doc.get("scenarios", [])
    out = {}
    for item in doc:
        try:
            sc = Scenario(item["name"], item["kind"], dict(item["parameters"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParameterError(f"bad scenario entry {item!r}: {exc}") from exc
        out[sc.name] = sc
    return out
