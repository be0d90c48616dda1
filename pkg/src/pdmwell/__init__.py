"""Bound states and information measures for a solitonic-mass particle in a hyperbolic well."""

from .fdsolver import FDSpec, SpectrumResult, cross_validate, solve
from .infotheory import (
    BBM_BOUND,
    EntropyReport,
    FisherReport,
    entropy_report,
    fisher_report,
    shannon_momentum,
    shannon_position,
)
from .model import DomainError, ModelParams, energy_level
from .quadrature import QuadratureError, QuadratureSpec, integrate
from .states import BoundState, InadmissibleStateError, QuantumNumbers, build_state

__version__ = "0.1.0"

__all__ = [
    "BBM_BOUND",
    "BoundState",
    "DomainError",
    "EntropyReport",
    "FDSpec",
    "FisherReport",
    "InadmissibleStateError",
    "ModelParams",
    "QuadratureError",
    "QuadratureSpec",
    "QuantumNumbers",
    "SpectrumResult",
    "build_state",
    "cross_validate",
    "energy_level",
    "entropy_report",
    "fisher_report",
    "integrate",
    "shannon_momentum",
    "shannon_position",
    "solve",
]
