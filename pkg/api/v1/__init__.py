"""
API v1 Package
Contains all v1 API routers
"""

from api.v1.routers import all_routers

__all__ = ["all_routers"]
