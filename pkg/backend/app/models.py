"""
Wire Models for Matroid Strata
==============================
Pydantic request bodies shared by the HTTP routes and the CLI file readers:
- MatroidIn: any of the matroid JSON formats, or a gallery name
- PresentationIn: a presentation as written by `present` / `reduce`
- CapsIn: per-request resource caps on top of the environment defaults
"""

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

from app.config import ResourceCaps, default_caps
from app.services import gallery
from app.services.matroid import Matroid
from app.services.presentation import Presentation


# =============================================================================
# MATROIDS
# =============================================================================

class MatroidIn(BaseModel):
    """Exactly one of gallery / bases / nonbases / hyperplanes / matrix."""

    gallery: Optional[str] = None
    name: str = ""
    d: Optional[int] = Field(default=None, ge=0)
    n: Optional[int] = Field(default=None, ge=0)
    bases: Optional[list[list[int]]] = None
    nonbases: Optional[list[list[int]]] = None
    hyperplanes: Optional[list[list[int]]] = None
    matrix: Optional[list[list]] = None
    field: str = "QQ"

    @model_validator(mode="after")
    def _one_source(self) -> "MatroidIn":
        given = [k for k in ("gallery", "bases", "nonbases", "hyperplanes", "matrix")
                 if getattr(self, k) is not None]
        if len(given) > 1:
            raise ValueError(f"give one matroid source, got {given}")
        if not given and (self.d is None or self.n is None):
            raise ValueError("a matroid needs a gallery name, a matrix, or d and n")
        if given and given[0] in ("bases", "nonbases", "hyperplanes") and (self.d is None or self.n is None):
            raise ValueError(f"'{given[0]}' needs d and n")
        return self

    def to_matroid(self) -> Matroid:
        if self.gallery is not None:
            return gallery.named(self.gallery)
        return Matroid.from_json(self.model_dump(exclude_none=True, exclude={"gallery"}))


# =============================================================================
# PRESENTATIONS
# =============================================================================

class PresentationIn(BaseModel):
    vars: list[str]
    field: str = "QQ"
    ideal: list[str] = []
    semigroup: list[str] = []
    provenance: dict = {}

    def to_presentation(self) -> Presentation:
        return Presentation.from_json(self.model_dump())


class CapsIn(BaseModel):
    max_degree: Optional[int] = Field(default=None, gt=0)
    max_basis: Optional[int] = Field(default=None, gt=0)
    budget: Optional[int] = Field(default=None, gt=0)

    def to_caps(self) -> ResourceCaps:
        base = default_caps().model_dump()
        base.update(self.model_dump(exclude_none=True))
        return ResourceCaps(**base)


# =============================================================================
# REQUESTS
# =============================================================================

class MatroidRequest(BaseModel):
    matroid: MatroidIn


class CorankRequest(MatroidRequest):
    probe: Optional[list] = None  # weight vector v; the cell U_w^v is returned


class FlagRequest(MatroidRequest):
    verify: bool = True


class PresentationRequest(MatroidRequest):
    kind: Literal["stratum", "realization"] = "realization"
    reference: Optional[list[int]] = None  # circuit for realization, basis for stratum


class ReduceRequest(BaseModel):
    presentation: PresentationIn
    caps: CapsIn = CapsIn()


class ClassifyRequest(MatroidRequest):
    caps: CapsIn = CapsIn()
    max_circuits: Optional[int] = Field(default=None, gt=0)


class StarRequest(MatroidRequest):
    center_dimension: Optional[int] = Field(default=None, ge=0)


class HealthResponse(BaseModel):
    status: str
    version: str
