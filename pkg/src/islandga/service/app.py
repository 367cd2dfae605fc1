"""FastAPI service exposing the experiment harness.

Endpoints run synchronously; batches can take minutes, so clients should use
generous timeouts. CSV artifacts are returned in the response body and the
service itself never writes files.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..batch import (
    comparison_csv,
    compare_policies,
    entropy_csv,
    parse_summary_csv,
    results_csv,
    run_batch,
    run_sweep,
    summarize_batch,
    summary_csv,
)
from ..config import PRESETS, ConfigError, preset
from .schemas import (
    BatchResponse,
    CompareRequest,
    CompareResponse,
    ComparisonRowModel,
    ConfigModel,
    ExperimentRequest,
    HealthResponse,
    PolicySummaryModel,
    PresetModel,
    RunRow,
    SweepRequest,
    SweepResponse,
)


def _run_rows(batches) -> list[RunRow]:
    rows = []
    for batch in batches:
        for run_id, result in zip(batch.run_ids, batch.results):
            rows.append(
                RunRow(
                    run_id=run_id,
                    policy=batch.config.policy,
                    success=result.success,
                    total_evaluations=result.total_evaluations,
                    epochs=result.epochs,
                )
            )
    rows.sort(key=lambda r: r.run_id)
    return rows


def create_app() -> FastAPI:
    app = FastAPI(title="islandga", version=__version__)

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.get("/presets", response_model=list[PresetModel])
    def list_presets() -> list[PresetModel]:
        return [
            PresetModel(name=name, config=ConfigModel.from_config(cfg))
            for name, cfg in sorted(PRESETS.items())
        ]

    @app.get("/presets/{name}", response_model=PresetModel)
    def get_preset(name: str) -> PresetModel:
        if name not in PRESETS:
            raise HTTPException(status_code=404, detail=f"unknown preset {name!r}")
        return PresetModel(name=name, config=ConfigModel.from_config(preset(name)))

    @app.post("/experiments/run", response_model=BatchResponse)
    def run_experiment(request: ExperimentRequest) -> BatchResponse:
        try:
            config = request.resolve()
        except (ConfigError, TypeError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        batch = run_batch(config, workers=request.workers)
        summary = summarize_batch(batch)
        return BatchResponse(
            config=ConfigModel.from_config(config),
            runs=_run_rows([batch]),
            summary=PolicySummaryModel.from_summary(summary),
            results_csv=results_csv([batch]),
            entropy_csv=entropy_csv([batch]),
            summary_csv=summary_csv([summary]),
        )

    @app.post("/experiments/sweep", response_model=SweepResponse)
    def sweep_experiment(request: SweepRequest) -> SweepResponse:
        try:
            config = request.resolve()
            batches = run_sweep(config, request.policies, workers=request.workers)
            summaries = [summarize_batch(b) for b in batches]
            rows = compare_policies(summaries)
        except (ConfigError, TypeError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return SweepResponse(
            config=ConfigModel.from_config(config),
            policies=list(request.policies),
            runs=_run_rows(batches),
            summaries=[PolicySummaryModel.from_summary(s) for s in summaries],
            comparison=[ComparisonRowModel.from_row(r) for r in rows],
            results_csv=results_csv(batches),
            entropy_csv=entropy_csv(batches),
            summary_csv=summary_csv(summaries),
            comparison_csv=comparison_csv(rows),
        )

    @app.post("/compare", response_model=CompareResponse)
    def compare(request: CompareRequest) -> CompareResponse:
        try:
            summaries = []
            for i, text in enumerate(request.summaries):
                summaries.extend(parse_summary_csv(text, source=f"summaries[{i}]"))
            rows = compare_policies(summaries)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return CompareResponse(
            comparison=[ComparisonRowModel.from_row(r) for r in rows],
            comparison_csv=comparison_csv(rows),
        )

    return app


app = create_app()
