"""Time-domain steppers used to validate the dispersion analysis"""

from .models import FieldState, PeriodicGrid, PhaseMeasurement, StabilityRun
from .base import Stepper
from .fd_stepper import FDLeapFrogStepper, FDTrapezoidalStepper
from .dg_stepper import DGLeapFrogStepper

__all__ = [
    "FieldState",
    "PeriodicGrid",
    "PhaseMeasurement",
    "StabilityRun",
    "Stepper",
    "FDLeapFrogStepper",
    "FDTrapezoidalStepper",
    "DGLeapFrogStepper",
]
