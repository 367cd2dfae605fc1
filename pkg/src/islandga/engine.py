"""Steady-state GA for one island.

A generation creates G = ceil(selection_rate * M) offspring. Each offspring
comes from exactly one operator, chosen by the priority weights: two-point
crossover of two rank-selected parents (first child kept) or a single-bit
flip of one rank-selected parent. Offspring replace the G worst members, so
the best individual survives whenever G < M.
"""

from __future__ import annotations

import logging
import math
import random
from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

from .bitgenome import Genotype, random_genotype

logger = logging.getLogger(__name__)

# Cached linear-rank CDFs keyed by population size.
_RANK_CDF_CACHE: dict[int, list[float]] = {}


class EvalCounter:
    """Mutable tally of fitness evaluations performed on one island."""

    __slots__ = ("total",)

    def __init__(self, total: int = 0):
        self.total = total


class Individual:
    """A genotype with its fitness cached at creation time."""

    __slots__ = ("genotype", "fitness")

    def __init__(self, genotype: Genotype, fitness: float):
        self.genotype = genotype
        self.fitness = fitness

    def copy(self) -> "Individual":
        return Individual(self.genotype, self.fitness)

    def __repr__(self) -> str:
        return f"Individual(fitness={self.fitness}, genotype={self.genotype!r})"


def evaluate(problem, genotype: Genotype, counter: EvalCounter) -> Individual:
    """Evaluate a fresh genotype, counting exactly one evaluation.

    Reading an Individual's cached fitness afterwards never touches the
    counter; migrants therefore cost nothing at the receiver.
    """
    fitness = problem.evaluate(genotype)
    counter.total += 1
    return Individual(genotype, fitness)


class Population:
    """Fixed-size ordered collection of individuals.

    The member list order is insertion order; the fitness ranking breaks ties
    by that order (earlier members rank better), which makes best/worst/elite
    selections deterministic.
    """

    __slots__ = ("members", "_order")

    def __init__(self, members: Iterable[Individual]):
        self.members = list(members)
        self._order = None

    @classmethod
    def random(cls, problem, size: int, rng: random.Random, counter: EvalCounter) -> "Population":
        """Initialize with uniform random genotypes, evaluating each one."""
        if size < 1:
            raise ValueError(f"population size must be >= 1, got {size}")
        length = problem.length
        return cls(evaluate(problem, random_genotype(length, rng), counter) for _ in range(size))

    def __len__(self) -> int:
        return len(self.members)

    def ranked_indices(self) -> list[int]:
        """Member indices sorted best-first, ties by insertion order."""
        if self._order is None:
            fits = [ind.fitness for ind in self.members]
            self._order = sorted(range(len(fits)), key=fits.__getitem__, reverse=True)
        return self._order

    def ranked(self) -> list[Individual]:
        return [self.members[i] for i in self.ranked_indices()]

    def best(self) -> Individual:
        if not self.members:
            raise ValueError("empty population has no best member")
        return self.members[self.ranked_indices()[0]]

    def replace_worst(self, offspring: Sequence[Individual]) -> None:
        """Drop the worst len(offspring) members and append the offspring.

        Among equal-fitness members the one with the highest index is dropped
        first; survivors keep their relative order.
        """
        if len(offspring) > len(self.members):
            raise ValueError("cannot replace more members than the population holds")
        doomed = set(self.ranked_indices()[len(self.members) - len(offspring):])
        survivors = [ind for i, ind in enumerate(self.members) if i not in doomed]
        survivors.extend(offspring)
        self.members = survivors
        self._order = None

    def genotypes(self) -> list[Genotype]:
        return [ind.genotype for ind in self.members]

    def clone(self) -> "Population":
        return Population(ind.copy() for ind in self.members)


@dataclass
class GaParams:
    """Engine parameters for one island."""

    population_size: int
    selection_rate: float
    mutation_priority: float
    crossover_priority: float
    generations_to_migration: int
    max_evaluations: int

    def __post_init__(self):
        if self.population_size < 1:
            raise ValueError("population_size must be >= 1")
        if not 0.0 < self.selection_rate <= 1.0:
            raise ValueError("selection_rate must be in (0, 1]")
        if self.mutation_priority < 0 or self.crossover_priority < 0:
            raise ValueError("operator priorities must be non-negative")
        if self.mutation_priority + self.crossover_priority <= 0:
            raise ValueError("at least one operator priority must be positive")
        if self.generations_to_migration < 1:
            raise ValueError("generations_to_migration must be >= 1")
        if self.max_evaluations < 1:
            raise ValueError("max_evaluations must be >= 1")
        if self.selection_rate == 1.0:
            logger.warning(
                "selection_rate = 1.0 replaces the whole population each "
                "generation; the best individual is no longer guaranteed to survive"
            )

    @property
    def crossover_probability(self) -> float:
        return self.crossover_priority / (self.mutation_priority + self.crossover_priority)

    def offspring_count(self, population_size: int | None = None) -> int:
        m = self.population_size if population_size is None else population_size
        # small epsilon so rates that divide M exactly are not bumped up by
        # float noise (e.g. 0.1 * 30 -> 3.0000000000000004)
        return math.ceil(self.selection_rate * m - 1e-9)


def _rank_cdf(size: int) -> list[float]:
    cdf = _RANK_CDF_CACHE.get(size)
    if cdf is None:
        total = size * (size + 1) // 2
        cdf = []
        acc = 0
        for weight in range(size, 0, -1):
            acc += weight
            cdf.append(acc / total)
        _RANK_CDF_CACHE[size] = cdf
    return cdf


def rank_select_parent(population: Population, rng: random.Random) -> Individual:
    """Pick a member with linear-rank probability.

    The i-th best of M members (i = 1 is best) is chosen with probability
    2(M - i + 1) / (M (M + 1)).
    """
    members = population.members
    if not members:
        raise ValueError("cannot select from an empty population")
    order = population.ranked_indices()
    rank = bisect_right(_rank_cdf(len(members)), rng.random())
    return members[order[rank]]


def _crossover_segments(a: Genotype, b: Genotype, cut_lo: int, cut_hi: int) -> tuple[Genotype, Genotype]:
    """Swap the allele segment [cut_lo, cut_hi) between two parents."""
    length = a.length
    mask = ((1 << (cut_hi - cut_lo)) - 1) << (length - cut_hi)
    keep = ~mask
    return (
        Genotype(length, (a.bits & keep) | (b.bits & mask)),
        Genotype(length, (b.bits & keep) | (a.bits & mask)),
    )


def two_point_crossover(a: Genotype, b: Genotype, rng: random.Random) -> tuple[Genotype, Genotype]:
    """Classic two-point crossover; the cut pair is uniform over 0 <= i < j <= L."""
    if a.length != b.length:
        raise ValueError(f"length mismatch: {a.length} vs {b.length}")
    if a.length < 2:
        raise ValueError("two-point crossover needs length >= 2")
    cut_lo, cut_hi = sorted(rng.sample(range(a.length + 1), 2))
    return _crossover_segments(a, b, cut_lo, cut_hi)


def bitflip_mutation(genotype: Genotype, rng: random.Random) -> Genotype:
    """Copy of the genotype with exactly one uniformly chosen allele flipped."""
    position = rng.randrange(genotype.length)
    return Genotype(genotype.length, genotype.bits ^ (1 << (genotype.length - 1 - position)))


def generation_step(
    population: Population,
    params: GaParams,
    problem,
    rng: random.Random,
    counter: EvalCounter,
) -> Population:
    """Advance one steady-state generation in place; returns the population.

    Each offspring slot draws its operator first (crossover with probability
    crossover_priority / (mutation_priority + crossover_priority)), then its
    parent(s); every offspring costs exactly one evaluation.
    """
    count = params.offspring_count(len(population))
    p_crossover = params.crossover_probability
    offspring = []
    for _ in range(count):
        if rng.random() < p_crossover:
            first = rank_select_parent(population, rng).genotype
            second = rank_select_parent(population, rng).genotype
            child = two_point_crossover(first, second, rng)[0]
        else:
            parent = rank_select_parent(population, rng).genotype
            child = bitflip_mutation(parent, rng)
        offspring.append(evaluate(problem, child, counter))
    population.replace_worst(offspring)
    return population
