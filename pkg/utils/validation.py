"""
Validation of user input: range strings, run configuration files and the
conversion of request bodies into domain models
"""

import json
import math
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
from pydantic import ValidationError

from dispersion.models import LorentzMedium, Mesh, SchemeSpec
from schemas.common import SpatialKind, TemporalKind
from schemas.requests import MediumBody, MeshBody, RunConfig, SchemeBody
from utils.errors import ConfigError, InvalidCFL, InvalidFlux, InvalidMedium


def parse_range(text: str) -> np.ndarray:
    """
    Parse "a:b:n" into n evenly spaced values from a to b inclusive

    Raises:
        ConfigError: malformed text, n < 1 or non-finite bounds
    """
    parts = str(text).split(":")
    if len(parts) != 3:
        raise ConfigError(f"range '{text}' is not of the form a:b:n", operation="parse_range")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"range '{text}' has a non-numeric field", operation="parse_range")
    if count < 1 or not (math.isfinite(start) and math.isfinite(stop)):
        raise ConfigError(f"range '{text}' needs finite bounds and n >= 1", operation="parse_range")
    return np.linspace(start, stop, count)


def load_run_config(path: Union[str, Path]) -> RunConfig:
    """
    Read a --config JSON file

    Raises:
        ConfigError: unreadable file, invalid JSON or schema violations (unknown keys included)
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}", operation="load_run_config")
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e}", operation="load_run_config")
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(
            f"invalid config file {path}",
            operation="load_run_config",
            details={"errors": [err["msg"] for err in e.errors()]},
        )


def to_medium(body: Optional[MediumBody], default: Optional[LorentzMedium] = None) -> LorentzMedium:
    """
    Domain medium from a request body

    Raises:
        InvalidMedium: parameters violate eps_s > eps_inf > 0, gamma_hat >= 0, omega_1 > 0
    """
    if body is None:
        if default is None:
            raise InvalidMedium("no medium given", operation="to_medium")
        return default
    try:
        return LorentzMedium(**body.model_dump())
    except ValidationError as e:
        raise InvalidMedium(
            "invalid medium parameters",
            operation="to_medium",
            details={"errors": [err["msg"] for err in e.errors()]},
        )


def to_scheme(body: SchemeBody) -> SchemeSpec:
    """
    Raises:
        InvalidFlux: DG scheme without a flux
        ConfigError: other inconsistent fields
    """
    if body.spatial == SpatialKind.DG and body.flux is None:
        raise InvalidFlux("DG schemes need a flux", operation="to_scheme")
    try:
        return SchemeSpec(**body.model_dump())
    except ValidationError as e:
        raise ConfigError(
            "invalid scheme", operation="to_scheme", details={"errors": [err["msg"] for err in e.errors()]}
        )


def resolve_mesh(
    body: MeshBody, medium: LorentzMedium, temporal: TemporalKind
) -> Tuple[Optional[float], Optional[float], Optional[float]]:
    """
    (w1, omega1_h, nu) with the missing member derived

    Raises:
        ConfigError: a time-discretized run without W1, or no spatial mesh at all
    """
    w1, omega1_h, nu = Mesh(**body.model_dump()).resolve(medium.eps_inf)
    if temporal != TemporalKind.NONE and w1 is None:
        raise ConfigError("time-discretized schemes need w1 (or omega1_h and nu)", operation="resolve_mesh")
    return w1, omega1_h, nu


def check_cfl(nu: Optional[float], limit: Optional[float], allow_unstable: bool, label: str) -> None:
    """
    Raises:
        InvalidCFL: nu above a leap-frog limit without allow_unstable
    """
    if nu is None or limit is None or allow_unstable:
        return
    if nu > limit * (1.0 + 1e-12):
        raise InvalidCFL(
            f"nu = {nu:.6f} exceeds the {label} limit {limit:.6f}; pass --allow-unstable to run anyway",
            operation="check_cfl",
            details={"nu": nu, "limit": limit},
        )
