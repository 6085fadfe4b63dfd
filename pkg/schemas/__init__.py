"""
Pydantic schemas for API requests and responses
"""

from schemas.requests import (
    DGModesRequest,
    FDModesRequest,
    MediumBody,
    MeshBody,
    OmegaRequest,
    QuantitiesRequest,
    RunConfig,
    SchemeBody,
    TemporalRequest,
)
from schemas.responses import APIResponse
from schemas.common import (
    FluxKind,
    LogLevel,
    ModeClass,
    OutputFormat,
    SpatialKind,
    SystemLog,
    TemporalKind,
)

__all__ = [
    "DGModesRequest",
    "FDModesRequest",
    "MediumBody",
    "MeshBody",
    "OmegaRequest",
    "QuantitiesRequest",
    "RunConfig",
    "SchemeBody",
    "TemporalRequest",
    "APIResponse",
    "FluxKind",
    "LogLevel",
    "ModeClass",
    "OutputFormat",
    "SpatialKind",
    "SystemLog",
    "TemporalKind",
]
