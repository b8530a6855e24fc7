"""Photon-pair emission from atomic arrays whose atoms oscillate with a
spatially varying phase: plane-wave (linear kick) and vector-Bessel
(spinning phase) rates, form factors and SI estimates."""

__version__ = "0.1.0"

from .params import (  # noqa: E402
    AtomicSpecies, CubicLattice, CylindricalStack, LinearKick, ModulationSpec, NoPhase,
    ParameterError, PeriodicMonolayer, Spinning, norm_gamma0, norm_r0, to_dimensionless,
)
from .polarization import Pol, PlaneWaveMode, w_tilde, w_tilde_squared_circular  # noqa: E402
from .quadrature import ConvergenceError  # noqa: E402

__all__ = [
    "AtomicSpecies", "ConvergenceError", "CubicLattice", "CylindricalStack", "LinearKick",
    "ModulationSpec", "NoPhase", "ParameterError", "PeriodicMonolayer", "PlaneWaveMode",
    "Pol", "Spinning", "norm_gamma0", "norm_r0", "to_dimensionless", "w_tilde",
    "w_tilde_squared_circular",
]
