"""
Response models for API endpoints
"""

from datetime import datetime
from typing import Any, Dict, List, Union

from pydantic import BaseModel, Field


class APIResponse(BaseModel):
    """Standard API response model"""

    result: Union[str, Dict[str, Any], List[Any]]
    timestamp: datetime = Field(default_factory=datetime.now)
    success: bool = True
