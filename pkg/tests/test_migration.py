import random

import pytest

from islandga.bitgenome import Genotype, consensus, hamming_distance, random_genotype
from islandga.engine import Individual, Population
from islandga.migration import (
    CandidatePool,
    MigrantPolicy,
    PolicyContractError,
    POLICY_NAMES,
    Representative,
    RepresentativeKind,
    candidate_pool,
    incorporate_migrant,
    representative,
    select_migrant,
)


def pop_from(pairs):
    return Population(Individual(Genotype.from01(t), f) for t, f in pairs)


def random_population(rng, size, length):
    return Population(
        Individual(g, g.bits.bit_count() / length)
        for g in (random_genotype(length, rng) for _ in range(size))
    )


class TestPolicyKinds:
    def test_wire_names(self):
        assert POLICY_NAMES == ("best", "random", "mk", "mk-cons", "mke", "mke-cons")
        for name in POLICY_NAMES:
            assert MigrantPolicy(name).value == name

    def test_representative_kinds(self):
        assert not MigrantPolicy.BEST.needs_representative
        assert not MigrantPolicy.RANDOM.needs_representative
        assert MigrantPolicy.MK.representative_kind is RepresentativeKind.BEST_INDIVIDUAL
        assert MigrantPolicy.MKE.representative_kind is RepresentativeKind.BEST_INDIVIDUAL
        assert MigrantPolicy.MK_CONS.representative_kind is RepresentativeKind.CONSENSUS_SEQUENCE
        assert MigrantPolicy.MKE_CONS.representative_kind is RepresentativeKind.CONSENSUS_SEQUENCE

    def test_pools(self):
        assert MigrantPolicy.MK.pool is CandidatePool.FULL
        assert MigrantPolicy.MK_CONS.pool is CandidatePool.FULL
        assert MigrantPolicy.MKE.pool is CandidatePool.ELITE_HALF
        assert MigrantPolicy.MKE_CONS.pool is CandidatePool.ELITE_HALF


class TestRepresentative:
    def test_best_is_argmax(self):
        pop = pop_from([("0101", 0.4), ("1110", 0.97), ("0001", 0.2)])
        rep = representative(pop, RepresentativeKind.BEST_INDIVIDUAL)
        assert rep.genotype == Genotype.from01("1110")

    def test_best_tie_lowest_index(self):
        pop = pop_from([("0101", 0.9), ("1110", 0.9), ("0001", 0.2)])
        rep = representative(pop, RepresentativeKind.BEST_INDIVIDUAL)
        assert rep.genotype == Genotype.from01("0101")

    def test_consensus_kind(self):
        pop = pop_from([("010", 0.1), ("011", 0.2), ("110", 0.3)])
        rep = representative(pop, RepresentativeKind.CONSENSUS_SEQUENCE)
        assert rep.genotype == Genotype.from01("010")

    def test_empty_population(self):
        with pytest.raises(ValueError):
            representative(Population([]), RepresentativeKind.BEST_INDIVIDUAL)


class TestCandidatePool:
    def test_full_pool_is_whole_population(self):
        pop = random_population(random.Random(1), 32, 16)
        pool = candidate_pool(pop, CandidatePool.FULL)
        assert pool == pop.members

    def test_elite_half_even(self):
        pop = random_population(random.Random(2), 32, 16)
        pool = candidate_pool(pop, CandidatePool.ELITE_HALF)
        assert len(pool) == 16
        floor = min(ind.fitness for ind in pool)
        outside = [ind for ind in pop.members if ind not in pool]
        assert all(ind.fitness <= floor for ind in outside)

    def test_elite_half_odd_uses_ceiling(self):
        pop = pop_from([("01", 0.1), ("10", 0.5), ("11", 0.9)])
        pool = candidate_pool(pop, CandidatePool.ELITE_HALF)
        assert [ind.fitness for ind in pool] == [0.9, 0.5]


class TestSelectMigrant:
    def test_mk_forced_example(self):
        pop = pop_from([("000", 0.1), ("011", 0.2), ("110", 0.3)])
        rep = Representative(RepresentativeKind.BEST_INDIVIDUAL, Genotype.from01("000"))
        migrant = select_migrant(MigrantPolicy.MK, pop, rep)
        assert migrant.genotype == Genotype.from01("011")  # distance tie -> lowest index

    def test_best_agrees_with_representative(self):
        pop = random_population(random.Random(3), 16, 12)
        migrant = select_migrant(MigrantPolicy.BEST, pop)
        assert migrant.genotype == representative(pop, RepresentativeKind.BEST_INDIVIDUAL).genotype

    def test_random_is_reproducible(self):
        pop = random_population(random.Random(4), 16, 12)
        a = select_migrant(MigrantPolicy.RANDOM, pop, rng=random.Random(9))
        b = select_migrant(MigrantPolicy.RANDOM, pop, rng=random.Random(9))
        assert a.genotype == b.genotype

    def test_random_needs_rng(self):
        pop = random_population(random.Random(4), 4, 8)
        with pytest.raises(ValueError):
            select_migrant(MigrantPolicy.RANDOM, pop)

    def test_missing_representative_rejected(self):
        pop = random_population(random.Random(5), 8, 8)
        with pytest.raises(PolicyContractError):
            select_migrant(MigrantPolicy.MK, pop)

    def test_wrong_representative_kind_rejected(self):
        pop = random_population(random.Random(6), 8, 8)
        rep = Representative(RepresentativeKind.CONSENSUS_SEQUENCE, random_genotype(8, random.Random(0)))
        with pytest.raises(PolicyContractError):
            select_migrant(MigrantPolicy.MKE, pop, rep)

    def test_source_population_unchanged(self):
        pop = random_population(random.Random(7), 8, 8)
        before = [(ind.genotype.bits, ind.fitness) for ind in pop.members]
        rep = representative(pop, RepresentativeKind.BEST_INDIVIDUAL)
        migrant = select_migrant(MigrantPolicy.MK, pop, rep)
        migrant.fitness = -1.0  # mutating the copy must not touch the source
        assert [(ind.genotype.bits, ind.fitness) for ind in pop.members] == before

    def test_matches_exhaustive_scan_oracle(self):
        rng = random.Random(321)
        policies = (MigrantPolicy.MK, MigrantPolicy.MK_CONS, MigrantPolicy.MKE, MigrantPolicy.MKE_CONS)
        for _ in range(250):
            size = rng.randint(1, 16)
            length = rng.randint(2, 16)
            pop = random_population(rng, size, length)
            for policy in policies:
                if policy.representative_kind is RepresentativeKind.BEST_INDIVIDUAL:
                    target = pop.best().genotype
                else:
                    target = consensus(pop.genotypes())
                rep = Representative(policy.representative_kind, target)
                migrant = select_migrant(policy, pop, rep)
                pool = candidate_pool(pop, policy.pool)
                best_distance = max(hamming_distance(ind.genotype, target) for ind in pool)
                assert hamming_distance(migrant.genotype, target) == best_distance
                firsts = [ind for ind in pool if hamming_distance(ind.genotype, target) == best_distance]
                assert migrant.genotype == firsts[0].genotype

    def test_elite_pick_at_least_median_fitness(self):
        rng = random.Random(55)
        for _ in range(100):
            pop = random_population(rng, rng.randint(2, 16), 12)
            rep = representative(pop, RepresentativeKind.BEST_INDIVIDUAL)
            migrant = select_migrant(MigrantPolicy.MKE, pop, rep)
            fits = sorted(ind.fitness for ind in pop.members)
            mid = len(fits) // 2
            median = fits[mid] if len(fits) % 2 else (fits[mid - 1] + fits[mid]) / 2
            assert migrant.fitness >= median


class TestIncorporateMigrant:
    def test_replaces_worst(self):
        pop = pop_from([("0011", 0.5), ("0111", 0.8), ("0001", 0.1)])
        incorporate_migrant(pop, Individual(Genotype.from01("1111"), 0.9))
        fits = sorted(ind.fitness for ind in pop.members)
        assert fits == [0.5, 0.8, 0.9]
        assert pop.best().fitness == 0.9

    def test_tie_replaces_highest_index(self):
        pop = pop_from([("0011", 0.5), ("0101", 0.5), ("0110", 0.5)])
        incorporate_migrant(pop, Individual(Genotype.from01("1111"), 0.2))
        texts = [ind.genotype.to01() for ind in pop.members]
        assert texts == ["0011", "0101", "1111"]

    def test_identical_to_worst_keeps_fitness_multiset(self):
        pop = pop_from([("0011", 0.5), ("0001", 0.1)])
        incorporate_migrant(pop, Individual(Genotype.from01("0001"), 0.1))
        assert sorted(ind.fitness for ind in pop.members) == [0.1, 0.5]

    def test_size_is_invariant(self):
        rng = random.Random(8)
        pop = random_population(rng, 10, 8)
        for _ in range(5):
            incorporate_migrant(pop, Individual(random_genotype(8, rng), rng.random()))
            assert len(pop) == 10

    def test_length_mismatch(self):
        pop = pop_from([("0011", 0.5)])
        with pytest.raises(ValueError):
            incorporate_migrant(pop, Individual(Genotype.from01("011"), 0.5))

    def test_migration_adds_no_evaluations(self):
        # a migrant carries its cached fitness; nothing re-evaluates it
        pop = pop_from([("0011", 0.5), ("0001", 0.1)])
        migrant = Individual(Genotype.from01("1100"), 0.5)
        incorporate_migrant(pop, migrant)
        assert migrant in pop.members

    def test_best_policy_spread_property(self):
        rng = random.Random(60)
        for _ in range(50):
            sender = random_population(rng, 8, 10)
            receiver = random_population(rng, 8, 10)
            prior_best = receiver.best().fitness
            migrant = select_migrant(MigrantPolicy.BEST, sender)
            incorporate_migrant(receiver, migrant)
            assert receiver.best().fitness >= min(prior_best, sender.best().fitness)
