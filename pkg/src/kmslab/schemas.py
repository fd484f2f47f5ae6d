"""Pydantic models for scenario configs and the service wire format.

These models are the single source of configuration validation: the
scenario runner, the FastAPI service and the CLI all parse through them.
Unknown keys are rejected everywhere; silent defaults would undermine
reproducibility of the emitted reports.
"""

from __future__ import annotations

from typing import Literal, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

SCHEMA_VERSION = 1


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class GProfileConfig(StrictModel):
    kind: Literal["linear", "log", "table"]
    offset: float = 2.0
    values: list[float] | None = None


class FockConfig(StrictModel):
    dim: int = Field(ge=2)
    beta: float = Field(gt=0)
    g: GProfileConfig


class FunctionConfig(StrictModel):
    kind: Literal["cosh", "logcosh", "table"]
    b: float = 0.0
    r: float = 2.0
    ts: list[float] | None = None
    values: list[float] | None = None


class QuadratureConfig(StrictModel):
    half_width: float = Field(default=2.0, gt=0)
    nodes: int = Field(default=4096, ge=64)
    rule: Literal["trapezoid", "gauss"] = "trapezoid"


class XSpecConfig(StrictModel):
    kind: Literal["ladder_power", "deformed", "matrix_file"]
    m: int = Field(default=1, ge=1)
    f: FunctionConfig | None = None
    quadrature: QuadratureConfig | None = None
    path: str | None = None


class LambdaScaled(StrictModel):
    """Fitted modular eigenvalue scaled by a factor (for negative controls)."""

    auto_times: float = Field(gt=0)


class CheckEntryConfig(StrictModel):
    id: str
    params: dict = Field(default_factory=dict)
    negative_control: bool = False


class AbelianConfig(StrictModel):
    U: list[float]
    h: list[float] | None = None
    V: list[float]


class ScenarioConfig(StrictModel):
    schema_version: int = SCHEMA_VERSION
    name: str
    fock: FockConfig
    x: XSpecConfig | None = None
    lam: Union[float, Literal["auto"], LambdaScaled] = Field(default="auto", alias="lambda")
    times: list[float] = Field(default_factory=lambda: [1.0])
    checks: list[Union[str, CheckEntryConfig]] = Field(default_factory=list)
    tolerances: dict[str, float] = Field(default_factory=dict)
    seed: int = 0
    samples: int = Field(default=100, ge=1)
    abelian: AbelianConfig | None = None
    budget_seconds: float | None = Field(default=None, gt=0)

    @field_validator("schema_version")
    @classmethod
    def _supported_version(cls, v):
        if v != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {v}; this build reads {SCHEMA_VERSION}")
        return v

    def check_entries(self) -> list[CheckEntryConfig]:
        return [CheckEntryConfig(id=c) if isinstance(c, str) else c for c in self.checks]


class RunRequest(StrictModel):
    scenario: ScenarioConfig
    seed: int | None = None
    jobs: int = Field(default=1, ge=1)


class ReportModel(StrictModel):
    check: str
    claim: str
    params: dict = Field(default_factory=dict)
    residuals: dict = Field(default_factory=dict)
    tolerance: Union[float, dict, None] = None
    status: str
    detail: str = ""
    wall_time_s: float = 0.0
    spectra: dict[str, list[float]] = Field(default_factory=dict)


class RunResponse(StrictModel):
    schema_version: int = SCHEMA_VERSION
    scenario: str
    seed: int
    status: Literal["ok", "check_failed", "conditioning_abort"]
    exit_code: int
    reports: list[ReportModel]


class CheckInfo(StrictModel):
    id: str
    claim: str
    description: str
    params: list[str] = Field(default_factory=list)


class HealthResponse(StrictModel):
    status: str
    version: str
