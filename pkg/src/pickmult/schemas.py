"""Request and response models for the experiment service.

Complex numbers travel as [re, im] pairs; points as lists of pairs; holomap
components as coefficient pair lists, ascending degree. Unknown fields are
rejected so config typos fail loudly at the validation layer.
"""

from __future__ import annotations

from typing import Annotated, Any, Literal

from pydantic import BaseModel, ConfigDict, Field

ComplexPair = Annotated[list[float], Field(min_length=2, max_length=2)]
Point = list[ComplexPair]


class HolomapSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    components: list[list[ComplexPair]] = Field(min_length=1)
    boundary_normalized: bool = False


class MonomialSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    p: int = Field(ge=1)
    q: int = Field(ge=2)
    alpha: float = Field(gt=0.0, lt=1.0)


class BaseRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    tolerances: dict[str, Any] = Field(default_factory=dict)
    seed: int = Field(0, ge=0, lt=2**64)


class PickNormRequest(BaseRequest):
    nodes: list[Point] = Field(min_length=1)
    values: list[ComplexPair] = Field(min_length=1)
    expected_norm: float | None = None
    expected_tol: float = 1e-10


class HolomapCheckRequest(BaseRequest):
    holomap: HolomapSpec
    grid_size: int = Field(1024, ge=2)


class OperatorRRequest(BaseRequest):
    monomial: MonomialSpec | None = None
    holomap: HolomapSpec | None = None
    grid_size: int = Field(1024, ge=4)
    modes: int = Field(32, ge=0)
    oracle_tol: float = 1e-8
    offdiag_tol: float = 1e-8
    concentration: float = 0.99
    hs_grid_sizes: list[int] = Field(default_factory=list)
    hs_rel_tol: float = 0.02


class TargetTerm(BaseModel):
    model_config = ConfigDict(extra="forbid")
    powers: list[int] = Field(min_length=1)
    coeff: ComplexPair


class ExtensionProbeRequest(BaseRequest):
    holomap: HolomapSpec
    target: list[TargetTerm] = Field(min_length=1)
    schedule: list[int] = Field(min_length=1)
    cap: float | None = None
    cap_tol: float = 1e-8
    precondition_grid: int = Field(512, ge=4)


class DisjointUnionRequest(BaseRequest):
    groups: list[list[Point]] = Field(min_length=1)
    runs: int = Field(100, ge=1)
    inequality_tol: float = 1e-8


class AssertionResult(BaseModel):
    name: str
    passed: bool
    tolerance: float | None = None
    observed: float | str | None = None
    detail: str = ""


class ExperimentReport(BaseModel):
    kind: str
    seed: int
    config: dict[str, Any]
    metrics: dict[str, Any]
    assertions: list[AssertionResult]
    status: Literal["pass", "fail"]
    duration_seconds: float


class RunResponse(BaseModel):
    report: ExperimentReport
    files: dict[str, str]


class HealthResponse(BaseModel):
    status: str
    service: str
    version: str
