"""
Dependency injection for services
Manages the shared sweep executor and the default medium
"""

from concurrent.futures import Executor
from typing import Optional

from core.config import get_settings
from dispersion.models import LorentzMedium


# Global service instances
_sweep_executor: Optional[Executor] = None
_default_medium: Optional[LorentzMedium] = None
_warm_caches: dict = {}


def set_sweep_executor(executor: Optional[Executor]) -> None:
    """Set sweep executor instance"""
    global _sweep_executor
    _sweep_executor = executor


def get_sweep_executor() -> Optional[Executor]:
    """Get sweep executor instance"""
    return _sweep_executor


def set_default_medium(medium: LorentzMedium) -> None:
    """Set the medium used when a request omits one"""
    global _default_medium
    _default_medium = medium


def get_default_medium() -> LorentzMedium:
    """Get the default medium, building it from settings on first use"""
    global _default_medium
    if _default_medium is None:
        settings = get_settings()
        _default_medium = LorentzMedium(
            eps_s=settings.DEFAULT_EPS_S,
            eps_inf=settings.DEFAULT_EPS_INF,
            gamma_hat=settings.DEFAULT_GAMMA_HAT,
            omega_1=settings.DEFAULT_OMEGA_1,
        )
    return _default_medium


def record_warm_cache(name: str, size: int) -> None:
    _warm_caches[name] = size


def get_services_status() -> dict:
    """Get status of all services"""
    return {
        "sweep_executor": _sweep_executor is not None,
        "default_medium": _default_medium is not None,
        "warm_caches": dict(_warm_caches),
    }
