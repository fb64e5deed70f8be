from .physical import MomentumPair, PhysicalParams
from .regime import CutoffShape, DressingForm, Regime, VacuumForm

__all__ = [
    "CutoffShape",
    "DressingForm",
    "MomentumPair",
    "PhysicalParams",
    "Regime",
    "VacuumForm",
]
