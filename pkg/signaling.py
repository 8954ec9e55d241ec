"""
Evaluating signaling schemes: on security games (one reduced LP per signal) and on explicit
games, the clique-partition scheme built from planted cliques together with its feasible-strategy
lower bound, and a grid-based oracle for optimal signaling on explicit games with few states.
"""

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

import libsg as lib
from equilibrium import SecurityGame, solve_lp, solve_matrix_game, solve_security_subgame
from game import (CONSISTENCY_TOL, PRUNE_WEIGHT, BayesianZeroSumGame, ConvexDecomposition,
                  expected_matrix, reduce_signals)
from graphs import PlantedCoverInstance, bidensity
from libsg import InconsistentDecompositionError, InstanceTooLargeError, InvalidInputError

GRID_LIMIT = 10**5
"""Maximum number of simplex grid points evaluated by :py:func:`grid_envelope_oracle`."""


####################################################################################################

@dataclass
class SchemeEvaluation:
    per_signal: list[tuple[float, float]]
    """(alpha_sigma, subgame value u^sigma) for every signal, in signal order."""

    total: float
    """Σ alpha_sigma u^sigma: the row player's (attacker's) expected utility under the scheme."""

    def to_json(self) -> dict:
        return {"total": self.total,
                "per_signal": [{"alpha": a, "value": u} for a, u in self.per_signal]}


def _evaluation(alpha, values) -> SchemeEvaluation:
    per_signal = [(float(a), float(u)) for a, u in zip(alpha, values)]
    # summed in signal order, whatever order the subgames were solved in
    total = 0.0
    for a, u in per_signal:
        total += a * u
    return SchemeEvaluation(per_signal, total)


def _check_prior(dec: ConvexDecomposition, prior: np.ndarray):
    if dec.num_states != prior.size:
        raise lib.DimensionMismatchError(
            f"scheme over {dec.num_states} states for a game with {prior.size}")
    gap = float(np.abs(dec.alpha @ dec.posteriors - prior).max())
    if gap > CONSISTENCY_TOL:
        raise InconsistentDecompositionError(
            f"scheme does not decompose the game's prior (gap {gap:.3g})")


####################################################################################################

def evaluate_scheme_security(game: SecurityGame, dec: ConvexDecomposition, jobs: int = 1) \
        -> SchemeEvaluation:
    """
    Solves the security subgame of every signal and returns the weighted total. With `jobs` > 1
    the subgames are solved on a thread pool.
    """
    _check_prior(dec, game.prior)
    posteriors = list(dec.posteriors)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda x: solve_security_subgame(game, x), posteriors))
    else:
        results = [solve_security_subgame(game, x) for x in posteriors]
    return _evaluation(dec.alpha, [r.value for r in results])


def evaluate_scheme_explicit(game: BayesianZeroSumGame, dec: ConvexDecomposition) \
        -> SchemeEvaluation:
    """
    Row player's utility of a scheme on an explicit game: the value of the posterior expected
    matrix of every signal, weighted by alpha.
    """
    _check_prior(dec, game.prior)
    values = [solve_matrix_game(expected_matrix(game, x)).value for x in dec.posteriors]
    return _evaluation(dec.alpha, values)


####################################################################################################

def clique_partition(instance: PlantedCoverInstance) -> list[tuple[int, np.ndarray]]:
    """
    Residual planted sets Ŝ_i = S_i minus the earlier cliques, in planting order, preceded by the
    leftover set Ŝ_0 of uncovered vertices. Returns `(i, vertices)` pairs, empty sets omitted.
    """
    label = np.zeros(instance.n, dtype=np.int64)
    for i, clique in enumerate(instance.planted_cliques, start=1):
        members = np.array(sorted(clique), dtype=np.int64)
        fresh = members[label[members] == 0]
        label[fresh] = i
    parts = []
    for i in range(len(instance.planted_cliques) + 1):
        vertices = np.flatnonzero(label == i)
        if vertices.size:
            parts.append((i, vertices))
    return parts


def build_clique_partition_scheme(instance: PlantedCoverInstance) -> ConvexDecomposition:
    """
    The scheme announcing which residual planted set contains the realized state (uniform prior):
    alpha_i = |Ŝ_i| / n and x_i uniform on Ŝ_i.
    """
    if not instance.planted_cliques:
        raise InvalidInputError("the clique-partition scheme needs at least one planted clique")
    n = instance.n
    parts = clique_partition(instance)
    alpha = np.array([vertices.size / n for _, vertices in parts])
    posteriors = np.zeros((len(parts), n))
    for row, (_, vertices) in enumerate(parts):
        posteriors[row, vertices] = 1.0 / vertices.size
    return ConvexDecomposition(alpha, posteriors, np.full(n, 1.0 / n))


####################################################################################################

def scheme_utility_lower_bound(instance: PlantedCoverInstance, dec: ConvexDecomposition,
                               d: int, rho: float) -> float:
    """
    Σ_i alpha_i (bden(T_i, T_i) − 2 d rho / |T_i|) where T_i is the support of posterior i: what
    the attacker guarantees by playing uniformly on T_i. Requires uniform posteriors over
    disjoint supports (the clique-partition shape).
    """
    g = instance.graph
    seen = np.zeros(g.n, dtype=bool)
    bound = 0.0
    for sigma, (a, x) in enumerate(zip(dec.alpha, dec.posteriors)):
        support = np.flatnonzero(x > 0)
        mass = x[support]
        if mass.max() - mass.min() > 1e-9:
            raise InvalidInputError(f"posterior {sigma} is not uniform on its support")
        if seen[support].any():
            raise InvalidInputError(f"posterior {sigma} overlaps the support of an earlier one")
        seen[support] = True
        bound += a * (bidensity(g, support, support) - 2 * d * rho / support.size)
    return bound


def lemma3_analytic_bound(coverage: float, c: float = 150.0) -> float:
    """
    Closed-form bound coverage − 15/c on the clique-partition scheme's attacker utility, for
    r = 3n/k cliques and rho·d = k/c (with c = 150 and coverage 0.9 this is 0.8).
    """
    return coverage - 15.0 / c


####################################################################################################

@dataclass
class EnvelopeResult:
    value: float
    """Optimal row-player utility over schemes whose posteriors lie on the grid."""

    decomposition: ConvexDecomposition
    """An optimal grid-supported scheme, reduced to at most M+1 signals."""

    error_bound: float
    """L·h: how far below the true concave envelope `value` can be."""

    grid_points: int
    opaque_value: float
    """f(prior): the value without signaling."""


def simplex_grid(num_states: int, steps: int) -> np.ndarray:
    """All points of the probability simplex whose coordinates are multiples of 1/steps."""
    points = []
    for bars in itertools.combinations(range(steps + num_states - 1), num_states - 1):
        edges = (-1,) + bars + (steps + num_states - 1,)
        points.append([edges[i + 1] - edges[i] - 1 for i in range(num_states)])
    return np.array(points, dtype=float) / steps


def grid_envelope_oracle(game: BayesianZeroSumGame, resolution: float) -> EnvelopeResult:
    """
    Approximates the concave envelope of f(x) = value(E_x[A]) at the prior: evaluates f on the
    simplex grid of spacing 1/steps, steps = round(1/resolution) (so the spacing is `resolution`
    exactly when its inverse is an integer), then maximizes Σ alpha_g f(x_g) over alpha >= 0 with
    Σ alpha_g x_g = prior. The grid contains every vertex e_theta, so the LP is always feasible.
    The reported error bound L/steps uses the actual spacing.
    """
    if not 0.0 < resolution <= 0.5:
        raise InvalidInputError(f"grid resolution must lie in (0, 0.5], got {resolution}")
    m = game.num_states
    steps = max(2, round(1.0 / resolution))
    count = math.comb(steps + m - 1, m - 1)
    if count > GRID_LIMIT:
        raise InstanceTooLargeError(
            f"a grid of spacing {resolution} over {m} states has {count} points "
            f"(limit {GRID_LIMIT})")

    points = simplex_grid(m, steps)
    values = np.array([solve_matrix_game(expected_matrix(game, x)).value for x in points])
    lib.debug(f"envelope grid: {count} points, f in [{values.min():.4g}, {values.max():.4g}]")

    res = solve_lp(
        "solve the concave envelope LP",
        c=-values,
        A_eq=np.vstack([points.T, np.ones(count)]),
        b_eq=np.r_[game.prior, 1.0],
        bounds=[(0, None)] * count)
    alpha = np.clip(res.x, 0.0, None)
    keep = alpha >= PRUNE_WEIGHT
    # the LP meets the prior up to its feasibility tolerance; keep the exact weighted mean
    dec = ConvexDecomposition(alpha[keep] / alpha[keep].sum(), points[keep])
    dec = reduce_signals(dec, values[keep])

    return EnvelopeResult(
        value=-float(res.fun),
        decomposition=dec,
        error_bound=game.lipschitz_constant / steps,
        grid_points=count,
        opaque_value=solve_matrix_game(expected_matrix(game, game.prior)).value)

####################################################################################################
