"""
Statistical checks of the random-graph facts the analysis relies on: no dense cluster pairs in
G(n, p), coverage of the planted cliques, the edge-count distinguisher, and equality in
distribution of amplified and directly planted instances.

Each check is deterministic given its seeds and reports its observed statistic alongside the
pass/fail verdict.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

import libsg as lib
from config import ExperimentConfig
from graphs import (Graph, PlantedCoverInstance, amplify_instance, bidensity,
                    edge_count_distinguisher, gen_gnp, gen_planted_cover)


####################################################################################################

@dataclass
class ValidatorResult:
    name: str
    passed: bool
    observed: float
    """The statistic the verdict is based on (worst bidensity, coverage, accuracy, p-value)."""
    threshold: float
    details: dict

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "observed": self.observed,
                "threshold": self.threshold, **self.details}


####################################################################################################

def bidensity_validator(n: int, p: float, config: ExperimentConfig, seed: int,
                        graph: Graph | None = None) -> ValidatorResult:
    """
    Samples `config.pair_samples` pairs of random clusters of sizes between
    ⌈min_cluster_factor · log2 n⌉ and twice that, and fails if any pair has bidensity above
    density_slack · p. Runs on G(n, p) drawn from `seed` unless `graph` is given.
    """
    g = graph if graph is not None else gen_gnp(n, p, seed, tag="validator-graph")
    lo = min(g.n, math.ceil(config.min_cluster_factor * math.log2(g.n)))
    hi = min(g.n, 2 * lo)
    threshold = config.density_slack * p
    rng = lib.make_rng(seed, "validator-clusters")
    worst = 0.0
    for _ in range(config.pair_samples):
        sizes = rng.integers(lo, hi + 1, size=2)
        x = lib.partial_shuffle(rng, g.n, int(sizes[0]))
        y = lib.partial_shuffle(rng, g.n, int(sizes[1]))
        worst = max(worst, bidensity(g, x, y))
    lib.debug(f"bidensity validator, seed {seed}: worst {worst:.4f} vs {threshold:.4f}")
    return ValidatorResult("bidensity", worst <= threshold, worst, threshold,
                           {"seed": seed, "min_cluster_size": lo, "samples": config.pair_samples})


####################################################################################################

def coverage_fraction(instance: PlantedCoverInstance) -> float:
    """|S_1 ∪ ... ∪ S_r| / n."""
    return len(instance.covered_vertices()) / instance.n


def coverage_validator(instance: PlantedCoverInstance, target: float = 0.9) -> ValidatorResult:
    coverage = coverage_fraction(instance)
    return ValidatorResult("coverage", coverage >= target, coverage, target,
                           {"seed": instance.seed, "cliques": len(instance.planted_cliques)})


####################################################################################################

def distinguisher_accuracy(n: int, p: float, k: int, r: int, seeds: list[int]) -> float:
    """
    Fraction of correct verdicts of the edge-count distinguisher over one G(n, p) and one
    G(n, p, k, r) instance per seed.
    """
    correct = 0
    for seed in seeds:
        null = gen_gnp(n, p, seed, tag="null")
        planted = gen_planted_cover(n, p, k, r, seed).graph
        correct += edge_count_distinguisher(null, p, k, r).verdict == "null"
        correct += edge_count_distinguisher(planted, p, k, r).verdict == "planted"
    return correct / (2 * len(seeds))


def distinguisher_validator(n: int, p: float, k: int, r: int, seeds: list[int],
                            target: float = 0.95) -> ValidatorResult:
    accuracy = distinguisher_accuracy(n, p, k, r, seeds)
    return ValidatorResult("distinguisher", accuracy >= target, accuracy, target,
                           {"instances": 2 * len(seeds)})


####################################################################################################

def amplification_validator(n: int, p: float, k: int, r: int, seeds: list[int],
                            significance: float = 0.01) -> ValidatorResult:
    """
    Two-sample Kolmogorov-Smirnov test between the edge counts of G(n, p, k) amplified with
    r − 1 more cliques and those of G(n, p, k, r) planted directly. Both have the same
    distribution, so the test should not reject.
    """
    amplified = []
    direct = []
    for seed in seeds:
        base = gen_planted_cover(n, p, k, 1, seed)
        amplified.append(amplify_instance(base.graph, p, k, r - 1, seed).graph.m)
        direct.append(gen_planted_cover(n, p, k, r, lib.child_seed(seed, "direct")).graph.m)
    test = stats.ks_2samp(amplified, direct)
    return ValidatorResult(
        "amplification", bool(test.pvalue >= significance), float(test.pvalue), significance,
        {"statistic": float(test.statistic),
         "mean_amplified": float(np.mean(amplified)),
         "mean_direct": float(np.mean(direct))})

####################################################################################################
