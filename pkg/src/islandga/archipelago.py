"""Ring of islands: epoch scheduler, representative exchange, migrant routing.

One epoch is: every island runs ``generations_to_migration`` steady-state
generations (islands advance in index order), per-island entropy is recorded,
then one ring-wide migrant exchange happens in two phases — all migrants are
selected against the pre-exchange populations, then all are delivered to the
successor island. The run stops at the end of the generation step in which
the optimum first appears (if stop_on_optimum) or once the summed evaluation
count reaches the budget.

All randomness flows from one run seed through a documented derivation
(sha256 of "seed:label:..." strings), so a run is bit-reproducible: the
problem instance gets one stream, and each island gets its own independent
stream keyed by island id.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from statistics import fmean
from typing import Callable

from .config import ExperimentConfig
from .engine import EvalCounter, Population, generation_step
from .metrics import phenotypic_entropy
from .migration import MigrantPolicy, incorporate_migrant, representative, select_migrant

# Float guard when comparing best fitness against the known optimum.
OPTIMUM_EPS = 1e-9


def derive_seed(master_seed: int, *labels) -> int:
    """Stable 64-bit sub-seed for the given label path."""
    material = ":".join([str(master_seed), *map(str, labels)])
    digest = hashlib.sha256(material.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def replicate_seed(master_seed: int, index: int) -> int:
    """Seed of the index-th replicate run of a batch."""
    return derive_seed(master_seed, "replicate", index)


def optimum_reached(population: Population, problem) -> bool:
    """True once the best member's fitness is within OPTIMUM_EPS of the optimum."""
    return population.best().fitness >= problem.optimum - OPTIMUM_EPS


@dataclass
class EpochRecord:
    """Per-island snapshot taken after an epoch's generation phase."""

    epoch: int
    island: int
    best_fitness: float
    mean_fitness: float
    entropy: float
    evaluations: int


@dataclass
class RunResult:
    """Outcome of one archipelago run."""

    success: bool
    total_evaluations: int
    epochs: int
    solving_island: int | None
    best_fitness: float
    records: list[EpochRecord] = field(default_factory=list)

    def entropy_trace(self, island: int) -> list[tuple[int, float]]:
        return [(r.epoch, r.entropy) for r in self.records if r.island == island]

    def mean_entropy_by_epoch(self) -> dict[int, float]:
        """Across-island average entropy, keyed by epoch."""
        by_epoch: dict[int, list[float]] = {}
        for r in self.records:
            by_epoch.setdefault(r.epoch, []).append(r.entropy)
        return {epoch: fmean(vals) for epoch, vals in by_epoch.items()}


class Island:
    """One node of the ring: a population plus its private rng and counter."""

    __slots__ = ("id", "population", "rng", "counter")

    def __init__(self, island_id: int, population: Population, rng: random.Random, counter: EvalCounter):
        self.id = island_id
        self.population = population
        self.rng = rng
        self.counter = counter


def run(
    config: ExperimentConfig,
    seed: int,
    step_observer: Callable[[int, int, int, int], None] | None = None,
) -> RunResult:
    """Execute one seeded run of the configured archipelago.

    ``step_observer(epoch, island_id, generation_index, island_evaluations)``
    is called after every generation step; it exists for instrumentation and
    tests and has no effect on the run.
    """
    config.validate()
    params = config.ga_params()
    policy = MigrantPolicy(config.policy)
    problem = config.build_problem(random.Random(derive_seed(seed, "problem")))
    n = config.islands

    islands = []
    for i in range(n):
        rng = random.Random(derive_seed(seed, "island", i))
        counter = EvalCounter()
        population = Population.random(problem, params.population_size, rng, counter)
        islands.append(Island(i, population, rng, counter))

    records: list[EpochRecord] = []

    def snapshot(epoch: int) -> None:
        for isl in islands:
            fits = [ind.fitness for ind in isl.population.members]
            records.append(
                EpochRecord(
                    epoch=epoch,
                    island=isl.id,
                    best_fitness=isl.population.best().fitness,
                    mean_fitness=fmean(fits),
                    entropy=phenotypic_entropy(isl.population),
                    evaluations=isl.counter.total,
                )
            )

    def total_evaluations() -> int:
        return sum(isl.counter.total for isl in islands)

    snapshot(0)

    success = False
    solving_island = None
    for isl in islands:
        if optimum_reached(isl.population, problem):
            success = True
            solving_island = isl.id
            break

    stop = (success and config.stop_on_optimum) or total_evaluations() >= config.max_evaluations
    epoch = 0
    while not stop:
        epoch += 1
        # phase 1: isolated evolution, islands in index order
        for isl in islands:
            for gen in range(params.generations_to_migration):
                generation_step(isl.population, params, problem, isl.rng, isl.counter)
                if step_observer is not None:
                    step_observer(epoch, isl.id, gen, isl.counter.total)
                if not success and optimum_reached(isl.population, problem):
                    success = True
                    solving_island = isl.id
                if success and config.stop_on_optimum:
                    stop = True
                    break
                if total_evaluations() >= config.max_evaluations:
                    stop = True
                    break
            if stop:
                break
        if stop:
            break

        # phase 2: record entropy (pre-migration)
        snapshot(epoch)

        # phase 3: representative exchange — island i summarizes itself for
        # its predecessor, which addresses its migrant to island i
        reps = None
        if policy.needs_representative:
            kind = policy.representative_kind
            reps = [representative(isl.population, kind) for isl in islands]

        # phase 4: every island selects its migrant against the pre-exchange
        # populations (two-phase so same-epoch migrants cannot interact)
        migrants = []
        for i, isl in enumerate(islands):
            rep = reps[(i + 1) % n] if reps is not None else None
            migrants.append(select_migrant(policy, isl.population, rep, isl.rng))

        # phase 5: deliver around the ring
        for i, migrant in enumerate(migrants):
            incorporate_migrant(islands[(i + 1) % n].population, migrant)

        # phase 6: optimum check; migrants are copies of already-checked
        # individuals, so this only confirms a success seen in phase 1
        if not success:
            for isl in islands:
                if optimum_reached(isl.population, problem):
                    success = True
                    solving_island = isl.id
                    break
            if success and config.stop_on_optimum:
                stop = True

    best = max(isl.population.best().fitness for isl in islands)
    return RunResult(
        success=success,
        total_evaluations=total_evaluations(),
        epochs=epoch,
        solving_island=solving_island,
        best_fitness=best,
        records=records,
    )
