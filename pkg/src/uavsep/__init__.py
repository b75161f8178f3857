"""Safety radii for UAV avoidance under imperfect communication."""

from .channel import UncertaintyBudget
from .core import DegenerateGeometryError, ObstacleParams, ParameterError, VehicleParams
from .kernels import BACKEND
from .radius import RadiusReport, designed_safety_radius, radius_report

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DegenerateGeometryError",
    "ObstacleParams",
    "ParameterError",
    "RadiusReport",
    "UncertaintyBudget",
    "VehicleParams",
    "designed_safety_radius",
    "radius_report",
]
