"""
Utility functions for errors, responses and serialization

utils.validation is imported directly; it depends on the dispersion models,
which themselves raise the errors defined here.
"""

from utils.responses import create_success_response, write_table
from utils.errors import create_detailed_error_response, add_system_log

__all__ = [
    "create_success_response",
    "write_table",
    "create_detailed_error_response",
    "add_system_log",
]
