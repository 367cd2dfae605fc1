"""Replicated experiment batches, their CSV artifacts, and policy comparison.

File formats (comma-separated, header row, '.' decimal separator):

* results.csv    run_id, policy, success, total_evaluations, epochs
* entropy.csv    run_id, epoch, island, entropy
* summary.csv    policy, metric, value   (one metric per row; the extra
                 "problem" metric carries the experimental-setup label used
                 to keep comparisons honest)
* comparison.csv policy, rank_by_median, rank_by_mean, median, mean, q1, q3,
                 min, max, successes, runs, success_rate

Evaluation statistics are computed over successful runs only; the success
rate is reported separately. Rows are ordered by run_id.
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import partial
from typing import Iterable, Sequence

from .archipelago import RunResult, replicate_seed, run
from .config import ExperimentConfig
from .metrics import SummaryStats, summarize

RESULTS_COLUMNS = ("run_id", "policy", "success", "total_evaluations", "epochs")
ENTROPY_COLUMNS = ("run_id", "epoch", "island", "entropy")
SUMMARY_COLUMNS = ("policy", "metric", "value")
COMPARISON_COLUMNS = (
    "policy", "rank_by_median", "rank_by_mean", "median", "mean",
    "q1", "q3", "min", "max", "successes", "runs", "success_rate",
)
_STAT_METRICS = ("median", "mean", "q1", "q3", "min", "max")


def run_id_for(policy: str, index: int) -> str:
    return f"{policy}-r{index:04d}"


@dataclass
class BatchResult:
    """All replicate outcomes of one (config, policy) batch."""

    config: ExperimentConfig
    run_ids: list[str]
    results: list[RunResult]


@dataclass
class PolicySummary:
    """Per-policy statistics of total evaluations over successful runs."""

    policy: str
    setup: str
    runs: int
    successes: int
    stats: SummaryStats | None

    @property
    def success_rate(self) -> float:
        return self.successes / self.runs


@dataclass
class ComparisonRow:
    policy: str
    rank_by_median: int
    rank_by_mean: int
    median: float | None
    mean: float | None
    q1: float | None
    q3: float | None
    min: float | None
    max: float | None
    successes: int
    runs: int
    success_rate: float


def run_batch(config: ExperimentConfig, workers: int = 1) -> BatchResult:
    """Run ``config.replicates`` independent seeded runs of one policy.

    Replicate seeds derive from the master seed, so reruns are reproducible
    and batch output is identical whether replicates run sequentially or on
    ``workers`` processes.
    """
    config.validate()
    seeds = [replicate_seed(config.master_seed, r) for r in range(config.replicates)]
    if workers > 1 and config.replicates > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(partial(run, config), seeds))
    else:
        results = [run(config, seed) for seed in seeds]
    run_ids = [run_id_for(config.policy, r) for r in range(config.replicates)]
    return BatchResult(config=config, run_ids=run_ids, results=results)


def run_sweep(config: ExperimentConfig, policies: Sequence[str], workers: int = 1) -> list[BatchResult]:
    """One batch per policy, sharing every other config field (and seeds)."""
    if not policies:
        raise ValueError("sweep needs at least one policy")
    return [run_batch(replace(config, policy=p).validate(), workers=workers) for p in policies]


def summarize_batch(batch: BatchResult) -> PolicySummary:
    solved = [r.total_evaluations for r in batch.results if r.success]
    return PolicySummary(
        policy=batch.config.policy,
        setup=batch.config.setup_label(),
        runs=len(batch.results),
        successes=len(solved),
        stats=summarize(solved) if solved else None,
    )


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _render(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return out.getvalue()


def results_csv(batches: Iterable[BatchResult]) -> str:
    rows = []
    for batch in batches:
        for run_id, result in zip(batch.run_ids, batch.results):
            rows.append((run_id, batch.config.policy, result.success,
                         result.total_evaluations, result.epochs))
    rows.sort(key=lambda row: row[0])
    return _render(RESULTS_COLUMNS, rows)


def entropy_csv(batches: Iterable[BatchResult]) -> str:
    rows = []
    for batch in batches:
        for run_id, result in zip(batch.run_ids, batch.results):
            for record in result.records:
                rows.append((run_id, record.epoch, record.island, record.entropy))
    rows.sort(key=lambda row: (row[0], row[1], row[2]))
    return _render(ENTROPY_COLUMNS, rows)


def summary_csv(summaries: Iterable[PolicySummary]) -> str:
    rows = []
    for s in summaries:
        rows.append((s.policy, "problem", s.setup))
        rows.append((s.policy, "runs", s.runs))
        rows.append((s.policy, "successes", s.successes))
        rows.append((s.policy, "success_rate", s.success_rate))
        for metric in _STAT_METRICS:
            rows.append((s.policy, metric, getattr(s.stats, metric) if s.stats else None))
    return _render(SUMMARY_COLUMNS, rows)


def parse_summary_csv(text: str, source: str = "<summary>") -> list[PolicySummary]:
    """Inverse of summary_csv; tolerates policies with no successful runs."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != SUMMARY_COLUMNS:
        raise ValueError(f"{source}: not a summary CSV (header {header!r})")
    per_policy: dict[str, dict[str, str]] = {}
    for row in reader:
        if len(row) != 3:
            raise ValueError(f"{source}: malformed row {row!r}")
        policy, metric, value = row
        per_policy.setdefault(policy, {})[metric] = value
    summaries = []
    for policy, metrics in per_policy.items():
        try:
            runs = int(metrics["runs"])
            successes = int(metrics["successes"])
            setup = metrics["problem"]
        except KeyError as exc:
            raise ValueError(f"{source}: policy {policy!r} is missing metric {exc}") from None
        stats = None
        if metrics.get("median"):
            stats = SummaryStats(
                median=float(metrics["median"]),
                mean=float(metrics["mean"]),
                q1=float(metrics["q1"]),
                q3=float(metrics["q3"]),
                min=float(metrics["min"]),
                max=float(metrics["max"]),
                n=successes,
            )
        summaries.append(PolicySummary(policy=policy, setup=setup, runs=runs,
                                       successes=successes, stats=stats))
    return summaries


def compare_policies(summaries: Sequence[PolicySummary]) -> list[ComparisonRow]:
    """Rank policies by median and mean evaluations-to-solution.

    All summaries must come from the same experimental setup. Policies with
    no successful runs rank after every policy with successes; ties order by
    policy name.
    """
    if len(summaries) < 2:
        raise ValueError("comparison needs at least two policy summaries")
    names = [s.policy for s in summaries]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate policy names in comparison inputs: {names}")
    setups = {s.setup for s in summaries}
    if len(setups) > 1:
        raise ValueError(
            "summaries describe different experimental setups and cannot be "
            f"compared: {sorted(setups)}"
        )

    def order(metric: str) -> dict[str, int]:
        def key(s: PolicySummary):
            value = getattr(s.stats, metric) if s.stats else None
            return (value is None, value if value is not None else 0.0, s.policy)
        return {s.policy: i + 1 for i, s in enumerate(sorted(summaries, key=key))}

    by_median = order("median")
    by_mean = order("mean")
    rows = []
    for s in sorted(summaries, key=lambda s: by_median[s.policy]):
        stats = s.stats
        rows.append(
            ComparisonRow(
                policy=s.policy,
                rank_by_median=by_median[s.policy],
                rank_by_mean=by_mean[s.policy],
                median=stats.median if stats else None,
                mean=stats.mean if stats else None,
                q1=stats.q1 if stats else None,
                q3=stats.q3 if stats else None,
                min=stats.min if stats else None,
                max=stats.max if stats else None,
                successes=s.successes,
                runs=s.runs,
                success_rate=s.success_rate,
            )
        )
    return rows


def comparison_csv(rows: Sequence[ComparisonRow]) -> str:
    return _render(
        COMPARISON_COLUMNS,
        [
            (r.policy, r.rank_by_median, r.rank_by_mean, r.median, r.mean,
             r.q1, r.q3, r.min, r.max, r.successes, r.runs, r.success_rate)
            for r in rows
        ],
    )


def write_batch_outputs(out_dir, batches: Sequence[BatchResult]) -> dict[str, str]:
    """Write results/entropy/summary CSVs (plus comparison.csv for sweeps)."""
    os.makedirs(out_dir, exist_ok=True)
    summaries = [summarize_batch(b) for b in batches]
    artifacts = {
        "results.csv": results_csv(batches),
        "entropy.csv": entropy_csv(batches),
        "summary.csv": summary_csv(summaries),
    }
    if len(batches) > 1:
        artifacts["comparison.csv"] = comparison_csv(compare_policies(summaries))
    paths = {}
    for name, text in artifacts.items():
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        paths[name] = path
    return paths
