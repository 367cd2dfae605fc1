"""Population fitness entropy and cross-replicate summary statistics."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import log2
from statistics import fmean, quantiles
from typing import Iterable

from .engine import Population


def phenotypic_entropy(population: Population) -> float:
    """Shannon entropy (bits) of the distribution of fitness values.

    Members are grouped into classes by exact equality of their cached
    fitness; a fully converged population scores 0 and M all-distinct members
    score log2(M).
    """
    members = population.members
    if not members:
        raise ValueError("entropy of an empty population is undefined")
    size = len(members)
    counts = Counter(ind.fitness for ind in members)
    entropy = -sum((c / size) * log2(c / size) for c in counts.values())
    return entropy + 0.0  # normalize -0.0 for serialized traces


@dataclass
class SummaryStats:
    """Order statistics of one sample, as reported in summary CSVs."""

    median: float
    mean: float
    q1: float
    q3: float
    min: float
    max: float
    n: int


def summarize(values: Iterable[float]) -> SummaryStats:
    """Median (midpoint convention), mean, and inclusive linear-interpolation
    quartiles of a non-empty sample."""
    data = sorted(float(v) for v in values)
    if not data:
        raise ValueError("cannot summarize an empty sample")
    if len(data) == 1:
        q1 = med = q3 = data[0]
    else:
        q1, med, q3 = quantiles(data, n=4, method="inclusive")
    return SummaryStats(
        median=med,
        mean=fmean(data),
        q1=q1,
        q3=q3,
        min=data[0],
        max=data[-1],
        n=len(data),
    )
