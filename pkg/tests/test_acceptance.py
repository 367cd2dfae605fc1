"""Acceptance suite: one test per shipped criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s`. The statistical criteria
(1-3) replay the benchmark presets with fixed master seeds (101, 202, 303)
chosen up front; they are deterministic but take a few minutes.
"""

import math
import random
from dataclasses import replace
from fractions import Fraction

import pytest

from islandga.archipelago import replicate_seed, run
from islandga.batch import run_batch, run_sweep, summarize_batch
from islandga.bitgenome import Genotype, consensus, hamming_distance, random_genotype
from islandga.cli import main
from islandga.config import preset
from islandga.engine import EvalCounter, Individual, Population
from islandga.migration import (
    CandidatePool,
    MigrantPolicy,
    Representative,
    RepresentativeKind,
    candidate_pool,
    select_migrant,
)
from islandga.problems import MmdpProblem, PPeaksProblem, mmdp_subfitness


def report(number, label, checks):
    ok = all(passed for _, passed in checks)
    print(f"\ncriterion {number} ({label}): {'PASS' if ok else 'FAIL'}")
    for name, passed in checks:
        print(f"    [{'ok' if passed else 'FAIL'}] {name}")
    assert ok, f"criterion {number} ({label}): " + "; ".join(n for n, p in checks if not p)


def median_evals(summary):
    """Median evaluations over successful runs; +inf when nothing solved."""
    return summary.stats.median if summary.stats else math.inf


def mean_evals(summary):
    return summary.stats.mean if summary.stats else math.inf


@pytest.fixture(scope="module")
def ppeaks_policy_batches():
    config = replace(preset("ppeaks-8x32"), master_seed=101, replicates=30)
    return {b.config.policy: b for b in run_sweep(config, ["best", "random", "mk"])}


@pytest.fixture(scope="module")
def mmdp_policy_batches():
    config = replace(preset("mmdp-k20"), master_seed=202, replicates=30)
    return {b.config.policy: b for b in run_sweep(config, ["mk", "mke", "mke-cons", "random"])}


@pytest.fixture(scope="module")
def entropy_study_pairs():
    base = replace(preset("mmdp-k20"), master_seed=303, stop_on_optimum=False)
    pairs = []
    for r in range(20):
        seed = replicate_seed(303, r)
        traces = {}
        for policy in ("mke", "best"):
            result = run(replace(base, policy=policy), seed)
            traces[policy] = result.mean_entropy_by_epoch()
        pairs.append(traces)
    return pairs


def test_criterion_1_ppeaks_policy_ordering(ppeaks_policy_batches):
    summaries = {p: summarize_batch(b) for p, b in ppeaks_policy_batches.items()}
    for policy, summary in summaries.items():
        print(f"    ppeaks {policy}: solved {summary.successes}/{summary.runs}, "
              f"median={median_evals(summary)}, mean={mean_evals(summary)}")
    med = {p: median_evals(s) for p, s in summaries.items()}
    mean = {p: mean_evals(s) for p, s in summaries.items()}
    report(1, "P-Peaks policy ordering", [
        (f"median(best)={med['best']} >= 5 x median(mk)={med['mk']}",
         med["best"] >= 5 * med["mk"]),
        (f"mean(mk)={mean['mk']} <= mean(random)={mean['random']} <= mean(best)={mean['best']}",
         mean["mk"] <= mean["random"] <= mean["best"]),
        (f"median(mk)={med['mk']} <= 1.5 x median(random)={med['random']}",
         med["mk"] <= 1.5 * med["random"]),
    ])


def test_criterion_2_mmdp_elite_advantage(mmdp_policy_batches):
    summaries = {p: summarize_batch(b) for p, b in mmdp_policy_batches.items()}
    for policy, summary in summaries.items():
        print(f"    mmdp {policy}: success rate {summary.successes}/{summary.runs}, "
              f"median={median_evals(summary)}")
    med = {p: median_evals(s) for p, s in summaries.items()}
    report(2, "MMDP elite advantage", [
        (f"median(mke)={med['mke']} < median(mk)={med['mk']}", med["mke"] < med["mk"]),
        (f"median(mke)={med['mke']} < median(random)={med['random']}",
         med["mke"] < med["random"]),
        (f"median(mke-cons)={med['mke-cons']} <= 1.1 x median(mke)={med['mke']}",
         med["mke-cons"] <= 1.1 * med["mke"]),
    ])


def test_criterion_3_entropy_separation(entropy_study_pairs):
    separated = 0
    decreasing = 0
    for traces in entropy_study_pairs:
        late = sorted(set(traces["mke"]) & set(traces["best"]))
        late = [e for e in late if e >= 10]
        if late:
            mke_late = sum(traces["mke"][e] for e in late) / len(late)
            best_late = sum(traces["best"][e] for e in late) / len(late)
            separated += mke_late > best_late
        tail = [traces["best"][e] for e in sorted(traces["best"])][-5:]
        decreasing += all(b < a for a, b in zip(tail, tail[1:]))
    n = len(entropy_study_pairs)
    print(f"    separated pairs: {separated}/{n}; strictly-decreasing best tails: {decreasing}/{n}")
    report(3, "entropy separation", [
        (f"mean mke entropy > mean best entropy over epochs >= 10 in {separated}/{n} pairs (need >= 80%)",
         separated >= 0.8 * n),
        (f"best entropy strictly decreasing over last 5 epochs in {decreasing}/{n} runs (need >= 80%)",
         decreasing >= 0.8 * n),
    ])


def test_criterion_4_mmdp_fitness_exactness():
    table_ok = tuple(mmdp_subfitness(u) for u in range(7)) == (
        1.0, 0.0, 0.360384, 0.640576, 0.360384, 0.0, 1.0)
    constants = [Fraction(s) for s in ("1.0", "0.0", "0.360384", "0.640576",
                                       "0.360384", "0.0", "1.0")]
    problem = MmdpProblem(20)
    rng = random.Random(404)
    oracle_ok = True
    for _ in range(1000):
        geno = random_genotype(120, rng)
        text = geno.to01()
        expected = float(sum(constants[text[i:i + 6].count("1")] for i in range(0, 120, 6)))
        if problem.evaluate(geno) != expected:
            oracle_ok = False
            break
    report(4, "MMDP fitness exactness", [
        ("subfitness constants match to the last printed digit", table_ok),
        ("1000 random genotypes match the brute-force block-summation oracle exactly", oracle_ok),
    ])


def test_criterion_5_ppeaks_identity_and_conservation():
    rng = random.Random(505)
    peaks_ok = True
    for _ in range(100):
        problem = PPeaksProblem.generate(100, 64, rng)
        if any(problem.evaluate(peak) != 1.0 for peak in problem.peaks):
            peaks_ok = False
            break
    problem = PPeaksProblem.generate(100, 64, rng)
    conservation_ok = True
    for _ in range(10_000):
        x = random_genotype(64, rng)
        if problem.evaluate(x) * 64 + problem.nearest_peak_distance(x) != 64:
            conservation_ok = False
            break
    report(5, "P-Peaks identity and conservation", [
        ("every peak of 100 random instances scores exactly 1.0", peaks_ok),
        ("N*f(x) + min-distance(x) = N on 10,000 random genotypes", conservation_ok),
    ])


def test_criterion_6_consensus_oracle():
    rng = random.Random(606)
    all_ok = True
    ties_seen = 0
    for i in range(1000):
        size = rng.randint(1, 8) if i % 2 else 2 * rng.randint(1, 4)  # force even sizes often
        length = rng.randint(1, 16)
        pop = [random_genotype(length, rng) for _ in range(size)]
        expected = ""
        for pos in range(length):
            ones = sum(g[pos] for g in pop)
            if 2 * ones == size:
                ties_seen += 1
            expected += "1" if 2 * ones >= size else "0"
        if consensus(pop).to01() != expected:
            all_ok = False
            break
    report(6, "consensus oracle", [
        ("1000 random populations match per-column counting", all_ok),
        (f"tie columns resolved to allele 1 ({ties_seen} ties exercised)", ties_seen > 0 and all_ok),
    ])


def test_criterion_7_migrant_maximality():
    rng = random.Random(707)
    policies = (MigrantPolicy.MK, MigrantPolicy.MK_CONS, MigrantPolicy.MKE, MigrantPolicy.MKE_CONS)
    maximal_ok = True
    elite_ok = True
    for _ in range(1000):
        size = rng.randint(1, 12)
        length = rng.randint(2, 16)
        members = []
        for _ in range(size):
            geno = random_genotype(length, rng)
            members.append(Individual(geno, rng.random()))
        pop = Population(members)
        rep_geno = random_genotype(length, rng)
        for policy in policies:
            rep = Representative(policy.representative_kind, rep_geno)
            migrant = select_migrant(policy, pop, rep)
            pool = candidate_pool(pop, policy.pool)
            best_distance = max(hamming_distance(ind.genotype, rep_geno) for ind in pool)
            if hamming_distance(migrant.genotype, rep_geno) != best_distance:
                maximal_ok = False
            if policy is MigrantPolicy.MKE:
                fits = sorted(ind.fitness for ind in pop.members)
                mid = len(fits) // 2
                median = fits[mid] if len(fits) % 2 else (fits[mid - 1] + fits[mid]) / 2
                if migrant.fitness < median:
                    elite_ok = False
    report(7, "migrant maximality", [
        ("each mk-family pick attains the pool's maximum distance to the representative", maximal_ok),
        ("mke picks have fitness >= the population median", elite_ok),
    ])


CRITERION_8_CONFIG = """
problem = ppeaks
ppeaks_peaks = 10
ppeaks_length = 24
islands = 3
population_size = 12
selection_rate = 0.5
mutation_priority = 2
crossover_priority = 3
generations_to_migration = 3
max_evaluations = 20000
policy = mke
replicates = 4
master_seed = 808
"""


def test_criterion_8_end_to_end_determinism(tmp_path):
    config = tmp_path / "exp.cfg"
    config.write_text(CRITERION_8_CONFIG)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    code_a = main(["run", "--config", str(config), "--out-dir", str(out_a)])
    code_b = main(["run", "--config", str(config), "--out-dir", str(out_b)])
    same_results = (out_a / "results.csv").read_bytes() == (out_b / "results.csv").read_bytes()
    same_entropy = (out_a / "entropy.csv").read_bytes() == (out_b / "entropy.csv").read_bytes()
    report(8, "end-to-end determinism", [
        ("both runs exited 0", code_a == 0 and code_b == 0),
        ("results.csv byte-identical across reruns", same_results),
        ("entropy.csv byte-identical across reruns", same_entropy),
    ])


def test_criterion_9_evaluation_accounting():
    config = replace(
        preset("ppeaks-8x32"),
        islands=2,
        population_size=10,
        ppeaks_peaks=5,
        ppeaks_length=20,
        generations_to_migration=4,
        max_evaluations=4000,
        policy="mk",
        stop_on_optimum=False,
    ).validate()
    steps = []
    result = run(config, seed=909, step_observer=lambda e, i, g, t: steps.append((e, i, g)))
    offspring_per_step = config.ga_params().offspring_count()
    expected = 2 * 10 + len(steps) * offspring_per_step
    print(f"    instrumented: init {2 * 10} + {len(steps)} steps x {offspring_per_step} "
          f"offspring = {expected}; reported {result.total_evaluations}")
    report(9, "evaluation accounting", [
        ("total_evaluations = n*M + sum of offspring counts", result.total_evaluations == expected),
    ])
