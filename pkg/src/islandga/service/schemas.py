"""Pydantic request/response models for the experiment service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from ..batch import ComparisonRow, PolicySummary
from ..config import ExperimentConfig, preset


class HealthResponse(BaseModel):
    status: str
    version: str


class ConfigModel(BaseModel):
    """Wire form of a fully resolved experiment configuration."""

    model_config = ConfigDict(extra="forbid")

    problem: Literal["mmdp", "ppeaks"]
    islands: int
    population_size: int
    selection_rate: float
    mutation_priority: float
    crossover_priority: float
    generations_to_migration: int
    max_evaluations: int
    policy: str
    replicates: int
    master_seed: int
    mmdp_k: Optional[int] = None
    ppeaks_peaks: Optional[int] = None
    ppeaks_length: Optional[int] = None
    stop_on_optimum: bool = True

    @classmethod
    def from_config(cls, config: ExperimentConfig) -> "ConfigModel":
        return cls(**vars(config))

    def to_config(self) -> ExperimentConfig:
        return ExperimentConfig(**self.model_dump()).validate()


class ExperimentRequest(BaseModel):
    """A preset name, a full config, or a preset plus field overrides.

    Precedence mirrors the CLI: explicit fields override the preset's values.
    """

    model_config = ConfigDict(extra="forbid")

    preset: Optional[str] = None
    problem: Optional[Literal["mmdp", "ppeaks"]] = None
    islands: Optional[int] = None
    population_size: Optional[int] = None
    selection_rate: Optional[float] = None
    mutation_priority: Optional[float] = None
    crossover_priority: Optional[float] = None
    generations_to_migration: Optional[int] = None
    max_evaluations: Optional[int] = None
    policy: Optional[str] = None
    replicates: Optional[int] = None
    master_seed: Optional[int] = None
    mmdp_k: Optional[int] = None
    ppeaks_peaks: Optional[int] = None
    ppeaks_length: Optional[int] = None
    stop_on_optimum: Optional[bool] = None
    workers: int = Field(default=1, ge=1, le=64)

    def resolve(self) -> ExperimentConfig:
        overrides = self.model_dump(exclude={"preset", "workers", "policies"}, exclude_none=True)
        if self.preset is not None:
            base = preset(self.preset)
            return ExperimentConfig(**{**vars(base), **overrides}).validate()
        return ExperimentConfig(**overrides).validate()


class SweepRequest(ExperimentRequest):
    policies: list[str] = Field(min_length=2, description="policies to compare")


class RunRow(BaseModel):
    run_id: str
    policy: str
    success: bool
    total_evaluations: int
    epochs: int


class PolicySummaryModel(BaseModel):
    policy: str
    problem: str
    runs: int
    successes: int
    success_rate: float
    median: Optional[float] = None
    mean: Optional[float] = None
    q1: Optional[float] = None
    q3: Optional[float] = None
    min: Optional[float] = None
    max: Optional[float] = None

    @classmethod
    def from_summary(cls, summary: PolicySummary) -> "PolicySummaryModel":
        stats = summary.stats
        return cls(
            policy=summary.policy,
            problem=summary.setup,
            runs=summary.runs,
            successes=summary.successes,
            success_rate=summary.success_rate,
            median=stats.median if stats else None,
            mean=stats.mean if stats else None,
            q1=stats.q1 if stats else None,
            q3=stats.q3 if stats else None,
            min=stats.min if stats else None,
            max=stats.max if stats else None,
        )


class BatchResponse(BaseModel):
    config: ConfigModel
    runs: list[RunRow]
    summary: PolicySummaryModel
    results_csv: str
    entropy_csv: str
    summary_csv: str


class ComparisonRowModel(BaseModel):
    policy: str
    rank_by_median: int
    rank_by_mean: int
    median: Optional[float] = None
    mean: Optional[float] = None
    q1: Optional[float] = None
    q3: Optional[float] = None
    min: Optional[float] = None
    max: Optional[float] = None
    successes: int
    runs: int
    success_rate: float

    @classmethod
    def from_row(cls, row: ComparisonRow) -> "ComparisonRowModel":
        return cls(**vars(row))


class SweepResponse(BaseModel):
    config: ConfigModel
    policies: list[str]
    runs: list[RunRow]
    summaries: list[PolicySummaryModel]
    comparison: list[ComparisonRowModel]
    results_csv: str
    entropy_csv: str
    summary_csv: str
    comparison_csv: str


class CompareRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    summaries: list[str] = Field(min_length=1, description="summary.csv file contents")


class CompareResponse(BaseModel):
    comparison: list[ComparisonRowModel]
    comparison_csv: str


class PresetModel(BaseModel):
    name: str
    config: ConfigModel
