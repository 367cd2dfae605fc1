"""Migrant selection policies and receiver-side incorporation.

Six policies are supported. ``best`` and ``random`` are the classical
baselines. The ``mk*`` family sends the individual most *different* (by
Hamming distance) from a representative of the receiving population: the
representative is either that population's best individual (``mk``, ``mke``)
or its consensus sequence (``mk-cons``, ``mke-cons``), and the candidate pool
is either the whole sending population (``mk``, ``mk-cons``) or only its best
half (``mke``, ``mke-cons``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from .bitgenome import Genotype, consensus, hamming_distance
from .engine import Individual, Population


class PolicyContractError(ValueError):
    """A migration policy was invoked without the inputs it requires."""


class RepresentativeKind(Enum):
    BEST_INDIVIDUAL = "best-individual"
    CONSENSUS_SEQUENCE = "consensus-sequence"


class CandidatePool(Enum):
    FULL = "full"
    ELITE_HALF = "elite-half"


class MigrantPolicy(Enum):
    """Policy names are the wire/CSV strings used by configs and reports."""

    BEST = "best"
    RANDOM = "random"
    MK = "mk"
    MK_CONS = "mk-cons"
    MKE = "mke"
    MKE_CONS = "mke-cons"

    @property
    def needs_representative(self) -> bool:
        return self not in (MigrantPolicy.BEST, MigrantPolicy.RANDOM)

    @property
    def representative_kind(self) -> RepresentativeKind | None:
        if self in (MigrantPolicy.MK, MigrantPolicy.MKE):
            return RepresentativeKind.BEST_INDIVIDUAL
        if self in (MigrantPolicy.MK_CONS, MigrantPolicy.MKE_CONS):
            return RepresentativeKind.CONSENSUS_SEQUENCE
        return None

    @property
    def pool(self) -> CandidatePool:
        if self in (MigrantPolicy.MKE, MigrantPolicy.MKE_CONS):
            return CandidatePool.ELITE_HALF
        return CandidatePool.FULL


POLICY_NAMES = tuple(policy.value for policy in MigrantPolicy)


@dataclass
class Representative:
    """Concise stand-in for a whole population, shipped to the sender."""

    kind: RepresentativeKind
    genotype: Genotype


def representative(population: Population, kind: RepresentativeKind) -> Representative:
    """Summarize a population as its best member or its consensus sequence."""
    if not population.members:
        raise ValueError("cannot summarize an empty population")
    if kind is RepresentativeKind.BEST_INDIVIDUAL:
        genotype = population.best().genotype
    else:
        genotype = consensus(population.genotypes())
    return Representative(kind, genotype)


def candidate_pool(population: Population, pool: CandidatePool) -> list[Individual]:
    """Members eligible for emigration, best-first for the elite half."""
    if not population.members:
        raise ValueError("cannot build a pool from an empty population")
    if pool is CandidatePool.FULL:
        return list(population.members)
    half = (len(population.members) + 1) // 2
    return population.ranked()[:half]


def select_migrant(
    policy: MigrantPolicy,
    population: Population,
    rep: Representative | None = None,
    rng: random.Random | None = None,
) -> Individual:
    """Choose the individual this population sends; the source is untouched.

    mk* policies pick the pool member with maximum Hamming distance to the
    receiver's representative (ties go to the lowest pool index).
    """
    if not population.members:
        raise ValueError("cannot select a migrant from an empty population")
    if policy is MigrantPolicy.BEST:
        return population.best().copy()
    if policy is MigrantPolicy.RANDOM:
        if rng is None:
            raise ValueError("random policy needs an rng")
        return population.members[rng.randrange(len(population.members))].copy()
    if rep is None:
        raise PolicyContractError(f"policy {policy.value!r} needs a representative")
    if rep.kind is not policy.representative_kind:
        raise PolicyContractError(
            f"policy {policy.value!r} needs a {policy.representative_kind.value} "
            f"representative, got {rep.kind.value}"
        )
    pool = candidate_pool(population, policy.pool)
    target = rep.genotype
    chosen = max(pool, key=lambda ind: hamming_distance(ind.genotype, target))
    return chosen.copy()


def incorporate_migrant(population: Population, migrant: Individual) -> Population:
    """Replace the worst member (ties: highest index) with the migrant.

    The migrant's cached fitness is trusted, so incorporation costs no
    evaluations; population size is unchanged.
    """
    if not population.members:
        raise ValueError("cannot incorporate into an empty population")
    if migrant.genotype.length != population.members[0].genotype.length:
        raise ValueError(
            f"migrant length {migrant.genotype.length} != population length "
            f"{population.members[0].genotype.length}"
        )
    population.replace_worst([migrant])
    return population
