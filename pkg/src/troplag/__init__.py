"""Tropical Lagrangian multi-sections on toric surfaces and their realizations."""
from . import errors
from .fan import Fan, LatticeVector, ToricDivisor, build_fan, cross_fan, hexagon_fan, p2_fan

__version__ = "0.1.0"
__all__ = ["errors", "Fan", "LatticeVector", "ToricDivisor", "build_fan", "cross_fan", "hexagon_fan", "p2_fan"]
