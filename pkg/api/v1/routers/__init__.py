"""
API v1 Routers
Exports all router instances for registration in main app
"""

from api.v1.routers.health import router as health_router
from api.v1.routers.dispersion import router as dispersion_router
from api.v1.routers.logs import router as logs_router

# List of all routers to register
all_routers = [
    health_router,
    dispersion_router,
    logs_router,
]

__all__ = [
    "all_routers",
    "health_router",
    "dispersion_router",
    "logs_router",
]
