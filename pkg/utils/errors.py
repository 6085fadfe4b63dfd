"""
Error types and detailed error response utilities
"""

from typing import Optional, Dict, Any
from datetime import datetime
from fastapi.responses import JSONResponse


class DispersionError(Exception):
    """Base class for every analysis and stepping failure"""

    component = "Unknown"

    def __init__(
        self,
        message: str,
        operation: str = "Unknown",
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message)
        self.message = message
        self.operation = operation
        self.details = details or {}

    @property
    def error_type(self) -> str:
        return type(self).__name__


class ConfigError(DispersionError):
    """Malformed run configuration, range string or medium JSON"""

    component = "Config"


class InvalidMedium(ConfigError):
    component = "Medium"


class InvalidFlux(ConfigError):
    component = "DG"


class PoleAtResonance(DispersionError):
    """Lossless permittivity evaluated at its pole"""

    component = "Medium"


class TanPole(DispersionError):
    """tan(W/2) evaluated at an odd multiple of pi"""

    component = "Temporal"


class ZeroExactWavenumber(DispersionError):
    component = "Temporal"


class OrderTooLarge(DispersionError):
    component = "FD"


class InvalidCFL(ConfigError):
    """CFL number outside the range an operation accepts"""

    component = "FD"


class RootSolveFailed(DispersionError):
    component = "FD"


class ModeCountMismatch(DispersionError):
    """Root count disagrees with the quartic or quadratic count expected for the flux"""

    component = "DG"


class IllConditionedExtraction(DispersionError):
    component = "DG"


class BisectionFailed(DispersionError):
    component = "DG"


class DegreeTooLarge(DispersionError):
    component = "DG"


class DegenerateExact(DispersionError):
    component = "Quantities"


class DegeneratePsi(DispersionError):
    component = "Quantities"


class ZeroFrequency(DispersionError):
    component = "Quantities"


class EigenFailed(DispersionError):
    component = "OmegaSolver"


class BranchMismatch(DispersionError):
    component = "OmegaSolver"


class CFLViolation(DispersionError):
    component = "Stepper"


class SingularImplicitSystem(DispersionError):
    component = "Stepper"


class FitFailed(DispersionError):
    component = "Stepper"


class UnknownFigure(ConfigError):
    component = "Figures"


# CLI exit codes
EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_VALIDATION_FAILED = 2
EXIT_CONFIG_ERROR = 3


def exit_code_for(error: Exception) -> int:
    """Map an exception raised by a command to its process exit code"""
    if isinstance(error, ConfigError):
        return EXIT_CONFIG_ERROR
    return EXIT_FAILURE


def create_detailed_error_response(
    message: str,
    status_code: int = 400,
    error_type: str = "ValidationError",
    details: Optional[Dict[str, Any]] = None,
    component: str = "Unknown",
    operation: str = "Unknown",
) -> JSONResponse:
    """
    Create detailed error response that provides actionable debugging info

    Args:
        message: Error message
        status_code: HTTP status code
        error_type: Type of error (PoleAtResonance, TanPole, ...)
        details: Additional error details
        component: Component where error occurred
        operation: Operation being performed

    Returns:
        JSONResponse with comprehensive error information
    """
    error_details = dict(details or {})
    error_details.update(
        {
            "component": component,
            "operation": operation,
            "timestamp": datetime.now().isoformat(),
            "server_version": "1.0.0",
        }
    )

    return JSONResponse(
        status_code=status_code,
        content={
            "error": message,
            "error_type": error_type,
            "success": False,
            "details": error_details,
            "debug_help": _get_debug_help(error_type, component, operation),
        },
    )


def error_response_from(error: DispersionError, status_code: int = 422) -> JSONResponse:
    """Build the detailed JSON error body for an analysis exception"""
    return create_detailed_error_response(
        error.message,
        status_code=status_code,
        error_type=error.error_type,
        details=_jsonable(error.details),
        component=error.component,
        operation=error.operation,
    )


def _jsonable(details: Dict[str, Any]) -> Dict[str, Any]:
    out = {}
    for key, value in details.items():
        if isinstance(value, complex):
            out[key] = {"re": value.real, "im": value.imag}
        elif isinstance(value, (str, int, float, bool)) or value is None:
            out[key] = value
        else:
            out[key] = str(value)
    return out


def _get_debug_help(error_type: str, component: str, operation: str) -> str:
    """
    Provide debugging hints based on error context

    Args:
        error_type: Type of error
        component: Component name
        operation: Operation name

    Returns:
        Debug help message string
    """
    error_hints = {
        "PoleAtResonance": "The lossless permittivity has a pole at w_hat = 1 (or at the shifted w_hat * r_omega = 1). Offset the frequency grid or use gamma_hat > 0.",
        "TanPole": "w_hat * W1 hit an odd multiple of pi. Reduce W1 or the upper end of the frequency range.",
        "ZeroExactWavenumber": "The exact wavenumber vanishes at w_hat = sqrt(eps_s/eps_inf) for gamma_hat = 0; relative errors are undefined there.",
        "CFLViolation": "The leap-frog scheme is unstable at this CFL number. Lower nu or pass --allow-unstable.",
        "ModeCountMismatch": "The dispersion polynomial degree disagrees with the count expected for the flux. Check the flux parameters and the symbol assembly.",
        "BranchMismatch": "Two discrete frequency roots are equally close to an exact root. Move away from branch crossings.",
        "FitFailed": "The time-domain run under-resolves the wave or the wave is evanescent. Use more cells per wavelength or a frequency outside the absorption band.",
        "ConfigError": "Check the JSON config keys, range strings (a:b:n) and medium parameters.",
    }

    component_hints = {
        "Medium": "Check that eps_s > eps_inf > 0 and gamma_hat >= 0.",
        "Temporal": "Keep W = w_hat * W1 below pi over the whole sweep.",
        "FD": "Check the stencil order M (1..16) and the mesh parameters.",
        "DG": "Check the polynomial degree (0..8) and the flux name.",
        "Quantities": "Quantities need omega > 0 and a nonzero exact refraction index.",
        "OmegaSolver": "Check k_hat is real and omega1_h > 0.",
        "Stepper": "Steppers need at least 8 cells and a commensurate plane wave.",
        "Figures": "Valid figure ids are fig1 through fig14.",
    }

    # Error type-specific hint
    if error_type in error_hints:
        return error_hints[error_type]

    # Component-specific hint
    if component in component_hints:
        return component_hints[component]

    # Default hint
    return "Check server logs for more details."


def add_system_log(
    level: str,
    component: str,
    message: str,
    details: Optional[Dict[str, Any]] = None,
    log_list: Optional[list] = None,
) -> None:
    """
    Add a log entry to the system logs

    Args:
        level: Log level (debug, info, warning, error, critical)
        component: Component name
        message: Log message
        details: Additional log details
        log_list: List to append logs to (defaults to the process-wide ring)
    """
    from schemas.common import SystemLog, LogLevel

    log_entry = SystemLog(
        timestamp=datetime.now(),
        level=LogLevel(level),
        component=component,
        message=message,
        details=details or {},
    )

    if log_list is None:
        log_list = SYSTEM_LOGS

    log_list.append(log_entry)

    # Keep only last 1000 logs
    if len(log_list) > 1000:
        log_list.pop(0)


# Process-wide log ring, read by the /logs router
SYSTEM_LOGS: list = []
