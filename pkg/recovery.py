"""
Clique recovery from a signaling scheme.

A scheme that earns the attacker a lot on G(n, p, k, r) has to concentrate its posteriors on
dense regions of the graph, which at these densities means on planted cliques.
:py:func:`algorithm1_steps` turns every signal into a small cluster of vertices (by solving the
signal's subgame, dropping overrepresented vertices and re-optimizing against a capped
strategy), and :py:func:`approx_recover_clique` grows every cluster into a planted clique by
taking common neighbors of a random sample and keeping the vertices well connected among them.
"""

import math
from dataclasses import dataclass, field

import numpy as np

import libsg as lib
from equilibrium import SecurityGame, solve_lp, solve_security_subgame
from game import ConvexDecomposition
from graphs import Graph, PlantedCoverInstance
from libsg import InvalidInputError

LOG_BASE = 2
"""Base of the logarithm in the sample size sample_factor · log n."""

INVARIANT_TOL = 1e-6
"""Slack allowed when checking the cluster inequalities against LP output."""


####################################################################################################

@dataclass
class RecoveryParams:
    d: int
    """Defense budget of the security game."""

    rho: float
    """Protection reward of the security game."""

    epsilon: float = 0.1
    """Advantage of the scheme over 1/2; only used to report the background overlap threshold."""

    sample_factor: float = 200.0
    """c_R: the sample R drawn from a cluster has min(|T|, ⌈c_R log2 n⌉) vertices."""

    trial_budget: int = 5
    """Number of independent samples R drawn per cluster."""

    filter1_fraction: float = 1.0
    """
    Fraction of R a vertex must be adjacent to to survive the first filter. 1.0 keeps the common
    neighbors of R only; 0.8 is the slack used when R may contain a few non-clique vertices.
    """

    generic_lp: bool = False
    """Solve the capped re-optimization with a generic LP solver instead of in closed form."""

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise InvalidInputError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.sample_factor <= 0:
            raise InvalidInputError(f"sample factor must be positive, got {self.sample_factor}")
        if self.trial_budget < 1:
            raise InvalidInputError(f"trial budget must be at least 1, got {self.trial_budget}")
        if not 0.0 < self.filter1_fraction <= 1.0:
            raise InvalidInputError(
                f"filter 1 fraction must lie in (0, 1], got {self.filter1_fraction}")

    def sample_size(self, n: int, cluster_size: int) -> int:
        return max(1, min(cluster_size, math.ceil(self.sample_factor * math.log(n, LOG_BASE))))


####################################################################################################

@dataclass
class ClusterStep:
    """What the cluster extraction computed for one signal."""

    signal: int
    alpha: float
    x: np.ndarray
    y: np.ndarray
    """Attacker's equilibrium strategy in the signal's subgame."""
    value: float
    """Subgame value u^sigma."""
    x_hat: np.ndarray
    y_hat: np.ndarray
    scores: np.ndarray
    """x_hat^T A."""
    z: np.ndarray
    cluster: np.ndarray
    """Support of z, sorted."""
    overrepresented_mass: float
    """x(O) + y(O) for the set O of vertices whose x or y entry exceeded the cap."""


def cluster_size(d: int, rho: float) -> int:
    """Number of vertices per cluster, floor(rho·d / 2); at least 1."""
    m = math.floor(rho * d / 2 + 1e-9)
    if m < 1:
        raise InvalidInputError(f"cluster size degenerate: floor(rho·d / 2) = 0 for rho·d = {rho * d}")
    return m


def capped_maximizer(scores: np.ndarray, cap: float, m: int, generic_lp: bool) -> np.ndarray:
    """
    argmax scores^T z over 0 <= z <= cap, Σz <= 1. In closed form: cap on the m best-scoring
    vertices, ties to the smaller index.
    """
    n = scores.size
    if generic_lp:
        res = solve_lp(
            "solve the capped cluster LP",
            method="highs-ds",
            c=-scores,
            A_ub=np.ones((1, n)),
            b_ub=[1.0],
            bounds=[(0, cap)] * n)
        z = np.clip(res.x, 0.0, cap)
        z[z < 1e-12] = 0.0
        return z
    top = np.argsort(-scores, kind="stable")[:m]
    z = np.zeros(n)
    z[top] = cap
    return z


def algorithm1_steps(g: Graph, dec: ConvexDecomposition, d: int, rho: float,
                     min_weight: float = 0.0, generic_lp: bool = False) -> list[ClusterStep]:
    """
    Per signal of weight at least `min_weight`:

    1. solve the security subgame at x_sigma for the attacker's strategy y_sigma;
    2. zero the entries of x_sigma and y_sigma above the cap 2/(rho·d), giving x_hat and y_hat;
    3. maximize x_hat^T A z over 0 <= z <= cap, Σz <= 1 (cap on floor(rho·d/2) vertices);
    4. the cluster is the support of z.
    """
    m = cluster_size(d, rho)
    cap = 2.0 / (rho * d)
    game = SecurityGame(g, d, rho, prior=dec.prior)
    steps = []
    for sigma, (alpha, x) in enumerate(zip(dec.alpha, dec.posteriors)):
        if alpha < min_weight:
            continue
        result = solve_security_subgame(game, x)
        y = result.attacker_strategy
        over = (x > cap) | (y > cap)
        x_hat = np.where(x > cap, 0.0, x)
        y_hat = np.where(y > cap, 0.0, y)
        scores = g.matvec(x_hat)
        z = capped_maximizer(scores, cap, m, generic_lp)
        steps.append(ClusterStep(
            signal=sigma,
            alpha=float(alpha),
            x=np.asarray(x),
            y=y,
            value=result.value,
            x_hat=x_hat,
            y_hat=y_hat,
            scores=scores,
            z=z,
            cluster=np.flatnonzero(z),
            overrepresented_mass=float(x[over].sum() + y[over].sum())))
    lib.debug(f"cluster extraction: {len(steps)} of {dec.num_signals} signals, cluster size {m}")
    return steps


def algorithm1_clusters(g: Graph, dec: ConvexDecomposition, d: int, rho: float,
                        min_weight: float = 0.0, generic_lp: bool = False) -> list[np.ndarray]:
    """One cluster T_sigma per processed signal, in signal order."""
    return [step.cluster for step in algorithm1_steps(g, dec, d, rho, min_weight, generic_lp)]


####################################################################################################

@dataclass
class ClusterInvariantReport:
    value_bound_violations: list[int] = field(default_factory=list)
    """Signals with u^sigma > x_hat^T A y_hat + x(O) + y(O)."""

    dominance_violations: list[int] = field(default_factory=list)
    """Signals with x_hat^T A z < x_hat^T A y_hat."""

    shape_violations: list[int] = field(default_factory=list)
    """Signals whose z is not cap on exactly floor(rho·d/2) vertices."""

    scheme_value: float = 0.0
    """Σ alpha u^sigma over the processed signals."""

    scheme_bound: float = 0.0
    """The matching upper bound on `scheme_value` from the capped strategies."""

    @property
    def ok(self) -> bool:
        return not (self.value_bound_violations or self.dominance_violations
                    or self.shape_violations) \
            and bool(self.scheme_value <= self.scheme_bound + INVARIANT_TOL)


def check_cluster_invariants(g: Graph, steps: list[ClusterStep], d: int, rho: float) \
        -> ClusterInvariantReport:
    """
    Checks the inequalities that make clusters meaningful.

    Per signal, u^sigma <= x^T A y <= x_hat^T A y_hat + x(O) + y(O) (payoffs are at most 1), and
    z dominates y_hat in the capped LP. Summed over signals, the defender can protect every vertex
    of O with probability min(1, 1/rho) (|O| < rho·d), which tightens the slack to
    max(0, 1 − rho)(x(O) + y(O)): none at all once rho >= 1. The dominance check is exact when
    rho·d/2 is an integer.
    """
    m = cluster_size(d, rho)
    cap = 2.0 / (rho * d)
    slack_factor = max(0.0, 1.0 - rho)
    report = ClusterInvariantReport()
    for step in steps:
        capped = g.bilinear(step.x_hat, step.y_hat)
        if step.value > capped + step.overrepresented_mass + INVARIANT_TOL:
            report.value_bound_violations.append(step.signal)
        if step.scores @ step.z < step.scores @ step.y_hat - INVARIANT_TOL:
            report.dominance_violations.append(step.signal)
        nonzero = step.z[step.z > 0]
        if nonzero.size != m or np.abs(nonzero - cap).max() > 1e-9:
            report.shape_violations.append(step.signal)
        report.scheme_value += step.alpha * step.value
        report.scheme_bound += step.alpha * (capped + slack_factor * step.overrepresented_mass)
    return report


def background_overlap(steps: list[ClusterStep], instance: PlantedCoverInstance) -> list[float]:
    """
    x_hat^T A⁻ z per signal, where A⁻ holds the background edges only. Needs ground truth; on
    G(n, p, k, r) it stays near p for clusters inside planted cliques.
    """
    if instance.background is None:
        raise InvalidInputError("background edges are unknown for this instance")
    return [instance.background.bilinear(step.x_hat, step.z) for step in steps]


####################################################################################################

def verify_clique(g: Graph, s) -> bool:
    """True iff every pair of distinct vertices in `s` is adjacent."""
    vertices = sorted(set(int(v) for v in s))
    if len(vertices) <= 1:
        return True
    return bool(np.all(g.count_into(vertices, vertices) == len(vertices) - 1))


def approx_recover_clique(g: Graph, t, k: int, params: RecoveryParams, seed: int) \
        -> list[frozenset[int]]:
    """
    Tries to recover a planted k-clique overlapping the cluster `t`. Every trial draws a sample R
    from `t` and keeps

    - S̃: the vertices adjacent to (a `filter1_fraction` of) every other member of R,
    - Ŝ: the members of S̃ with at least k − 1 neighbors in S̃,

    emitting Ŝ when it is a clique of at least k vertices. Returns the distinct emissions in the
    order found; an empty list is a valid answer.
    """
    t = np.unique(np.asarray(list(t), dtype=np.int64))
    if t.size == 0:
        raise InvalidInputError("cannot recover a clique from an empty cluster")
    if k < 2:
        raise InvalidInputError(f"clique size must be at least 2, got {k}")

    size = params.sample_size(g.n, t.size)
    found = []
    for trial in range(params.trial_budget):
        rng = lib.make_rng(seed, "trial", trial)
        sample = t[lib.partial_shuffle(rng, t.size, size)]

        hits = g.unpack_rows(sample).sum(axis=0, dtype=np.int64)
        need = np.full(g.n, sample.size, dtype=np.int64)
        need[sample] -= 1
        survivors = np.flatnonzero(hits >= params.filter1_fraction * need - 1e-9)
        if survivors.size < k:
            continue

        inner = g.count_into(survivors, survivors)
        core = survivors[inner >= k - 1]
        if core.size >= k and verify_clique(g, core):
            clique = frozenset(int(v) for v in core)
            if clique not in found:
                found.append(clique)
    return found


####################################################################################################

@dataclass
class RecoveryReport:
    clusters: list[list[int]]
    candidates: list[frozenset[int]]
    """Distinct certified cliques found, in cluster order."""

    verified: list[frozenset[int]] | None = None
    """Candidates equal to some planted clique; None when no ground truth was given."""

    fraction_recovered: float | None = None
    """Distinct planted cliques among `verified`, over the number planted."""

    steps: list[ClusterStep] = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        data = {
            "clusters": self.clusters,
            "candidates": [sorted(c) for c in self.candidates],
        }
        if self.verified is not None:
            data["verified"] = [sorted(c) for c in self.verified]
            data["fraction_recovered"] = self.fraction_recovered
        return data


def recover_pipeline(g: Graph, dec: ConvexDecomposition, k: int, params: RecoveryParams,
                     seed: int, truth: list[frozenset[int]] | None = None) -> RecoveryReport:
    """
    Extracts one cluster per signal of weight at least 1/n², recovers cliques from every cluster
    (cluster j uses the child seed ("cluster", j)), and, when the planted cliques are given,
    scores the candidates by exact match. Recovery itself only ever sees `g` and `dec`.
    """
    n = g.n
    steps = algorithm1_steps(g, dec, params.d, params.rho, min_weight=1.0 / n**2,
                             generic_lp=params.generic_lp)
    candidates = []
    for j, step in enumerate(steps):
        cluster_seed = lib.child_seed(seed, "cluster", j)
        for clique in approx_recover_clique(g, step.cluster, k, params, cluster_seed):
            if clique not in candidates:
                candidates.append(clique)
    lib.info(f"Recovered {len(candidates)} candidate cliques from {len(steps)} clusters.")

    report = RecoveryReport(
        clusters=[step.cluster.tolist() for step in steps],
        candidates=candidates,
        steps=steps)
    if truth is not None:
        planted = set(truth)
        report.verified = [c for c in candidates if c in planted]
        report.fraction_recovered = len(set(report.verified)) / len(planted) if planted else 0.0
    return report

####################################################################################################
