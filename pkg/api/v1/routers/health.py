"""
Health and status endpoints for system monitoring
"""

from datetime import datetime
from fastapi import APIRouter

from core import get_settings, get_services_status, get_default_medium
from figures.recipes import FIGURES
from utils import create_success_response

router = APIRouter(tags=["health"])


@router.get("/health")
async def health_check():
    """Health check endpoint"""
    settings = get_settings()
    services = get_services_status()

    return create_success_response(
        {
            "status": "healthy",
            "output_directory": settings.OUTPUT_DIR,
            "components": services,
            "timestamp": datetime.now().isoformat(),
        }
    )


@router.get("/status")
async def get_status():
    """Get detailed server status"""
    settings = get_settings()
    medium = get_default_medium()

    return create_success_response(
        {
            "server": settings.API_TITLE,
            "version": settings.API_VERSION,
            "output_directory": settings.OUTPUT_DIR,
            "parallel_workers": settings.PARALLEL_WORKERS,
            "default_medium": medium.model_dump(),
            "features": [
                "temporal_dispersion",
                "fd_modes",
                "dg_modes",
                "physical_quantities",
                "omega_of_k",
                "cfl_limits",
            ],
            "figures": list(FIGURES),
        }
    )
