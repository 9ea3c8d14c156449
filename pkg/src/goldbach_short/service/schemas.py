"""Request and response models for the HTTP API.

Requests carry the same parameters the library functions take; zero
tables are referenced by server-local path (resolving to the bundled
table when omitted) because ordinate lists are data files, not request
payload.  Responses mirror the library's result dataclasses field for
field, so a client sees the same shapes the Python API returns.
"""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator


class StrictRequest(BaseModel):
    """Request base: unknown fields are rejected, not ignored."""

    model_config = ConfigDict(extra="forbid")


class ZerosSource(StrictRequest):
    """Which zero table to load; path None means the bundled table."""

    path: str | None = None
    max_count: int | None = Field(default=None, ge=1)


class SieveRequest(StrictRequest):
    start: int = Field(ge=1)
    end: int = Field(ge=1)
    include_values: bool = False

    @model_validator(mode="after")
    def _ordered(self) -> "SieveRequest":
        if self.end < self.start:
            raise ValueError(f"need start <= end, got [{self.start}, {self.end}]")
        return self


class SieveResponse(BaseModel):
    start: int
    end: int
    prime_power_count: int
    psi_end: float
    # positions/values only when include_values and the range is small
    positions: list[int] | None = None
    log_values: list[float] | None = None


class RValueRequest(StrictRequest):
    n: int = Field(ge=2)


class RValueResponse(BaseModel):
    n: int
    value: float
    method: str


class RWindowRequest(StrictRequest):
    N: int = Field(ge=2)
    H: int = Field(ge=1)
    method: Literal["fft", "direct"] = "fft"


class RWindowResponse(BaseModel):
    N: int
    H: int
    n0: int
    values: list[float]
    method: str


class CheckModel(BaseModel):
    """Mirror of the library's flat check record."""

    name: str
    passed: bool
    observed: float
    bound: float
    details: dict[str, Any] = Field(default_factory=dict)


class ZerosValidateRequest(StrictRequest):
    zeros: ZerosSource = Field(default_factory=ZerosSource)
    count_slack: float = Field(default=2.0, gt=0)


class ZerosValidateResponse(BaseModel):
    path: str
    count: int
    height: float
    declared_precision: float | None
    count_check: CheckModel
    passed: bool


class ZerosFindRequest(StrictRequest):
    T: float = Field(gt=0, le=500.0)
    grid_step: float = Field(default=0.05, gt=0, le=0.05)
    tol: float = Field(default=1e-9, gt=0)


class ZerosFindResponse(BaseModel):
    T: float
    count: int
    gammas: list[float]
    method: str


class PsiZeroSumRequest(StrictRequest):
    M: float = Field(gt=1)
    denominator_order: Literal[2, 3] = 2
    zeros: ZerosSource = Field(default_factory=ZerosSource)


class SecondDiffRequest(StrictRequest):
    N: int = Field(ge=2)
    H: int = Field(ge=1)
    zeros: ZerosSource = Field(default_factory=ZerosSource)
    force_path: Literal["Direct", "SeriesExpansion"] | None = None
    integral_check: bool = False


class ZeroSumResponse(BaseModel):
    """Mirror of the zero-sum result record."""

    value: float
    truncation_height: float
    terms_used: int
    tail_estimate: float
    evaluation_path: str
    metadata: dict[str, Any] = Field(default_factory=dict)
    # |value - integral evaluation| / |value| when integral_check was set
    integral_rel_diff: float | None = None


class ReportModel(BaseModel):
    """Mirror of the theorem-level verification report."""

    check_id: str
    inputs: dict[str, Any]
    lhs: float
    main_term: float
    zero_term: float
    observed_error: float
    bound: float
    ratio: float
    constant: float
    trend_slope: float | None = None
    trend_slope_limit: float | None = None
    passed: bool
    notes: dict[str, Any] = Field(default_factory=dict)


class VerifyMainRequest(StrictRequest):
    N: int = Field(ge=2)
    H: int = Field(ge=1)
    zeros: ZerosSource = Field(default_factory=ZerosSource)
    constants: dict[str, float] = Field(default_factory=dict)


class VerifyAverageRequest(StrictRequest):
    N: int = Field(ge=2)
    H: int = Field(ge=1)
    constants: dict[str, float] = Field(default_factory=dict)


class VerifyAverageResponse(BaseModel):
    max_report: ReportModel
    endpoint_report: ReportModel
    passed: bool


class VerifyLongRequest(StrictRequest):
    N: int = Field(ge=2)
    zeros: ZerosSource = Field(default_factory=ZerosSource)
    constants: dict[str, float] = Field(default_factory=dict)


class VerifyLongResponse(BaseModel):
    plain_report: ReportModel
    cesaro_report: ReportModel
    passed: bool


class LemmaRequest(StrictRequest):
    params: dict[str, Any] = Field(default_factory=dict)
    zeros: ZerosSource = Field(default_factory=ZerosSource)
    constants: dict[str, float] = Field(default_factory=dict)


class LemmaResponse(BaseModel):
    lemma_id: str
    results: list[CheckModel]
    passed: bool


class CampaignRequest(StrictRequest):
    checks: list[str] = Field(default_factory=lambda: ["main"])
    n_values: list[int] = Field(default_factory=list)
    thetas: list[float] = Field(default_factory=list)
    pairs: list[tuple[int, int]] = Field(default_factory=list)
    zeros: ZerosSource = Field(default_factory=ZerosSource)
    constants: dict[str, float] = Field(default_factory=dict)
    threads: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _nonempty_grid(self) -> "CampaignRequest":
        if not self.pairs and not (self.n_values and self.thetas):
            raise ValueError(
                "campaign grid is empty: give pairs or n_values with thetas"
            )
        return self


class HealthResponse(BaseModel):
    status: str
    version: str
    report_schema: str
