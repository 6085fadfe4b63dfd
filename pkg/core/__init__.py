"""
Core application components
The lifespan hooks live in core.lifespan and are imported by main.py directly,
since they depend on the analysis packages that themselves read core.config.
"""

from core.config import Settings, get_settings
from core.dependencies import (
    get_sweep_executor,
    set_sweep_executor,
    get_default_medium,
    set_default_medium,
    get_services_status,
)

__all__ = [
    "Settings",
    "get_settings",
    "get_sweep_executor",
    "set_sweep_executor",
    "get_default_medium",
    "set_default_medium",
    "get_services_status",
]
