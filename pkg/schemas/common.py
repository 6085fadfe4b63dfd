"""
Common types and enums shared across schemas
"""

from enum import Enum
from datetime import datetime
from typing import Optional, Dict, Any
from pydantic import BaseModel


class LogLevel(str, Enum):
    """System log levels"""

    DEBUG = "debug"
    INFO = "info"
    WARNING = "warning"
    ERROR = "error"
    CRITICAL = "critical"


class SystemLog(BaseModel):
    """System log entry model"""

    timestamp: datetime
    level: LogLevel
    component: str
    message: str
    details: Optional[Dict[str, Any]] = None


class TemporalKind(str, Enum):
    """Time integrators"""

    NONE = "none"  # semi-discrete in time (continuous)
    LEAPFROG = "lf"  # staggered leap-frog
    TRAPEZOIDAL = "tp"  # fully implicit trapezoidal rule


class SpatialKind(str, Enum):
    """Spatial discretizations"""

    NONE = "none"  # exact in space
    FD = "fd"  # staggered finite differences of order 2M
    DG = "dg"  # discontinuous Galerkin of degree p


class FluxKind(str, Enum):
    """Named DG numerical fluxes"""

    CENTRAL = "central"
    ALTERNATING_PLUS = "alt+"  # alpha = +1/2
    ALTERNATING_MINUS = "alt-"  # alpha = -1/2
    UPWIND = "upwind"


class ModeClass(str, Enum):
    """Classification of a discrete wavenumber"""

    PHYSICAL = "physical"  # converges to the exact wavenumber
    SPURIOUS = "spurious"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"
    SVG = "svg"
