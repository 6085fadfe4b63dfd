"""
API Package
Root API package containing all API versions
"""

from api.v1 import all_routers

__all__ = ["all_routers"]
