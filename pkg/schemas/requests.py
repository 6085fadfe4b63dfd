"""
Request models for API endpoints and the run configuration file
"""

from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from schemas.common import FluxKind, OutputFormat, SpatialKind, TemporalKind


class MediumBody(BaseModel):
    """Lorentz medium as sent by clients; checked when converted to the domain model"""

    model_config = ConfigDict(extra="forbid")

    eps_s: float = Field(5.25, description="Relative permittivity at zero frequency")
    eps_inf: float = Field(2.25, description="Relative permittivity at infinite frequency")
    gamma_hat: float = Field(0.01, description="gamma / omega_1")
    omega_1: float = Field(1.0, description="Resonance angular frequency")


class SchemeBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    temporal: TemporalKind = Field(TemporalKind.NONE, description="Time integrator (none, lf, tp)")
    spatial: SpatialKind = Field(SpatialKind.NONE, description="Spatial scheme (none, fd, dg)")
    order: int = Field(1, ge=0, description="FD order parameter M or DG degree p")
    flux: Optional[FluxKind] = Field(None, description="DG numerical flux")


class MeshBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    w1: Optional[float] = Field(None, gt=0, description="omega_1 * dt")
    omega1_h: Optional[float] = Field(None, gt=0, description="omega_1 * h")
    nu: Optional[float] = Field(None, gt=0, description="CFL number dt / (h sqrt(eps_inf))")


class TemporalRequest(BaseModel):
    """Request model for time-discretized phase errors"""

    medium: Optional[MediumBody] = Field(None, description="Medium; the default medium when omitted")
    w1: float = Field(..., gt=0, description="omega_1 * dt")
    w_hat: List[float] = Field(..., min_length=1, description="Relative frequencies")


class FDModesRequest(BaseModel):
    """Request model for FD2M mode sets"""

    medium: Optional[MediumBody] = Field(None, description="Medium; the default medium when omitted")
    scheme: TemporalKind = Field(TemporalKind.NONE, description="none (semi-discrete), lf or tp")
    M: int = Field(..., ge=1, description="FD order parameter")
    w_hat: float = Field(..., description="Relative frequency")
    mesh: MeshBody = Field(..., description="omega1_h for semi-discrete runs; two of (w1, omega1_h, nu) otherwise")


class DGModesRequest(BaseModel):
    """Request model for DG mode sets"""

    medium: Optional[MediumBody] = Field(None, description="Medium; the default medium when omitted")
    scheme: TemporalKind = Field(TemporalKind.NONE, description="none (semi-discrete), lf or tp")
    p: int = Field(..., ge=0, description="Polynomial degree")
    flux: FluxKind = Field(..., description="Numerical flux")
    w_hat: float = Field(..., description="Relative frequency")
    mesh: MeshBody = Field(..., description="omega1_h for semi-discrete runs; two of (w1, omega1_h, nu) otherwise")


class QuantitiesRequest(BaseModel):
    """Request model for normalized physical quantities"""

    medium: Optional[MediumBody] = Field(None, description="Medium; the default medium when omitted")
    scheme: SchemeBody = Field(..., description="Scheme whose physical mode is measured")
    mesh: MeshBody = Field(default_factory=MeshBody, description="Mesh of the scheme")
    w_hat: List[float] = Field(..., min_length=1, description="Relative frequencies (> 0)")


class OmegaRequest(BaseModel):
    """Request model for omega(k) branches"""

    medium: Optional[MediumBody] = Field(None, description="Medium; the default medium when omitted")
    M: int = Field(1, ge=1, description="FD order parameter")
    omega1_h: float = Field(..., gt=0, description="omega_1 * h")
    k_hat: List[float] = Field(..., min_length=1, description="Real wavenumbers k*h")


class RunConfig(BaseModel):
    """Contents of a --config JSON file"""

    model_config = ConfigDict(extra="forbid")

    medium: MediumBody = Field(default_factory=MediumBody)
    scheme: SchemeBody = Field(default_factory=SchemeBody)
    mesh: MeshBody = Field(default_factory=MeshBody)
    range: Optional[str] = Field(None, description="Sweep range a:b:n over w_hat")
    output: Optional[str] = Field(None, description="Output path")
    format: OutputFormat = Field(OutputFormat.CSV, description="csv, json or svg")
    allow_unstable: bool = Field(False, description="Permit leap-frog runs above the CFL limit")

    @model_validator(mode="after")
    def _check_mesh(self) -> "RunConfig":
        fully_discrete = self.scheme.temporal != TemporalKind.NONE and self.scheme.spatial != SpatialKind.NONE
        if fully_discrete and (self.mesh.omega1_h is None) == (self.mesh.nu is None):
            raise ValueError("give exactly one of mesh.omega1_h and mesh.nu for a fully discrete scheme")
        return self
