import numpy as np
import pytest

import libsg as lib
from equilibrium import SecurityGame
from game import (BayesianZeroSumGame, ConvexDecomposition, full_revelation_scheme, mix_schemes,
                  opaque_scheme, scheme_to_decomposition, weight_for_target)
from graphs import Graph, gen_planted_cover
from libsg import DimensionMismatchError, InstanceTooLargeError, InvalidInputError
from signaling import (build_clique_partition_scheme, clique_partition, evaluate_scheme_explicit,
                       evaluate_scheme_security, grid_envelope_oracle, lemma3_analytic_bound,
                       scheme_utility_lower_bound, simplex_grid)
from tests.conftest import instance_with_cliques


####################################################################################################
# Clique-partition scheme

def test_clique_partition_example():
    instance = instance_with_cliques(6, [{0, 1, 2}, {2, 3, 4}])
    parts = clique_partition(instance)
    assert [(i, v.tolist()) for i, v in parts] == [(0, [5]), (1, [0, 1, 2]), (2, [3, 4])]

    dec = build_clique_partition_scheme(instance)
    assert dec.alpha == pytest.approx([1 / 6, 1 / 2, 1 / 3])
    assert dec.posteriors[1] == pytest.approx([1 / 3, 1 / 3, 1 / 3, 0, 0, 0])
    assert dec.prior == pytest.approx(np.full(6, 1 / 6))


def test_disjoint_cliques_covering_everything():
    dec = build_clique_partition_scheme(instance_with_cliques(6, [{0, 1, 2}, {3, 4, 5}]))
    assert dec.alpha == pytest.approx([0.5, 0.5])


def test_single_clique_and_its_complement():
    instance = gen_planted_cover(50, 0.5, 10, 1, seed=1)
    dec = build_clique_partition_scheme(instance)
    assert dec.alpha == pytest.approx([0.8, 0.2])
    assert set(dec.supports()[1].tolist()) == instance.planted_cliques[0]


def test_clique_partition_needs_cliques():
    with pytest.raises(InvalidInputError):
        build_clique_partition_scheme(gen_planted_cover(20, 0.5, 5, 0, seed=1))


####################################################################################################
# Lower bound

def test_lower_bound_of_a_triangle():
    instance = instance_with_cliques(3, [{0, 1, 2}])
    dec = build_clique_partition_scheme(instance)
    assert scheme_utility_lower_bound(instance, dec, 1, 1.0) == pytest.approx(0.0)


def test_lower_bound_of_singletons():
    instance = instance_with_cliques(2, [{0}])
    dec = ConvexDecomposition([0.5, 0.5], np.eye(2))
    assert scheme_utility_lower_bound(instance, dec, 1, 1.0) == pytest.approx(-2.0)


def test_lower_bound_rejects_other_shapes():
    instance = instance_with_cliques(3, [{0, 1, 2}])
    with pytest.raises(InvalidInputError):
        scheme_utility_lower_bound(instance, ConvexDecomposition([1.0], [[0.5, 0.25, 0.25]]), 1, 1.0)
    overlapping = ConvexDecomposition([0.5, 0.5], [[0.5, 0.5, 0.0], [0.0, 0.5, 0.5]])
    with pytest.raises(InvalidInputError):
        scheme_utility_lower_bound(instance, overlapping, 1, 1.0)


def test_lower_bound_is_achievable():
    # the bound comes from a feasible attacker strategy, so the equilibrium does at least as well
    instance = gen_planted_cover(60, 0.5, 10, 18, seed=4)
    dec = build_clique_partition_scheme(instance)
    bound = scheme_utility_lower_bound(instance, dec, 2, 1.0)
    total = evaluate_scheme_security(SecurityGame(instance.graph, 2, 1.0), dec).total
    assert bound <= total + 1e-6


def test_analytic_bound():
    assert lemma3_analytic_bound(0.9) == pytest.approx(0.8)
    assert lemma3_analytic_bound(0.95, c=300) == pytest.approx(0.9)


####################################################################################################
# Scheme evaluation

def test_opaque_scheme_on_the_empty_graph():
    game = SecurityGame(Graph(4), 1, 1.0)
    dec = scheme_to_decomposition(game.prior, opaque_scheme(4))
    evaluation = evaluate_scheme_security(game, dec)
    assert evaluation.total == pytest.approx(-0.5, abs=1e-7)
    assert len(evaluation.per_signal) == 1


def test_full_revelation_on_the_empty_graph():
    game = SecurityGame(Graph(2), 1, 1.0)
    dec = scheme_to_decomposition(game.prior, full_revelation_scheme(2))
    evaluation = evaluate_scheme_security(game, dec)
    assert evaluation.total == pytest.approx(-1.0, abs=1e-7)
    assert [u for _, u in evaluation.per_signal] == pytest.approx([-1.0, -1.0], abs=1e-7)


def test_parallel_evaluation_matches():
    instance = gen_planted_cover(40, 0.5, 8, 6, seed=2)
    game = SecurityGame(instance.graph, 2, 1.0)
    dec = build_clique_partition_scheme(instance)
    serial = evaluate_scheme_security(game, dec)
    parallel = evaluate_scheme_security(game, dec, jobs=3)
    assert parallel.per_signal == serial.per_signal
    assert parallel.total == serial.total


def test_evaluation_checks_the_prior():
    game = SecurityGame(Graph(4), 1, 1.0)
    with pytest.raises(DimensionMismatchError):
        evaluate_scheme_security(game, ConvexDecomposition([1.0], [[0.5, 0.5, 0.0]]))
    with pytest.raises(lib.InconsistentDecompositionError):
        evaluate_scheme_security(game, ConvexDecomposition([1.0], [[1.0, 0.0, 0.0, 0.0]]))


def test_mixing_reaches_a_target_utility():
    rng = lib.make_rng(3, "mixing")
    game = BayesianZeroSumGame(rng.uniform(-1, 1, size=(2, 3, 3)), [0.4, 0.6])
    a, b = full_revelation_scheme(2), opaque_scheme(2)
    u_a = evaluate_scheme_explicit(game, scheme_to_decomposition(game.prior, a)).total
    u_b = evaluate_scheme_explicit(game, scheme_to_decomposition(game.prior, b)).total
    target = (u_a + u_b) / 2

    mixed = mix_schemes(a, b, weight_for_target(u_a, u_b, target))
    total = evaluate_scheme_explicit(game, scheme_to_decomposition(game.prior, mixed)).total
    assert total == pytest.approx(target, abs=1e-7)


####################################################################################################
# Concave envelope

def test_simplex_grid():
    grid = simplex_grid(3, 2)
    assert grid.shape == (6, 3)
    assert grid.sum(axis=1) == pytest.approx(np.ones(6))
    assert {tuple(p) for p in grid} >= {(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)}


def test_envelope_of_a_convex_value_function():
    game = BayesianZeroSumGame([[[1.0], [0.0]], [[0.0], [1.0]]], [0.5, 0.5])
    envelope = grid_envelope_oracle(game, 0.01)
    assert envelope.value == pytest.approx(1.0, abs=1e-7)
    assert envelope.opaque_value == pytest.approx(0.5, abs=1e-7)
    assert envelope.decomposition.num_signals <= 3
    dec = envelope.decomposition
    assert dec.alpha @ dec.posteriors == pytest.approx([0.5, 0.5], abs=1e-6)


def test_envelope_of_a_concave_value_function():
    game = BayesianZeroSumGame([[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 1.0]]], [0.5, 0.5])
    envelope = grid_envelope_oracle(game, 0.01)
    assert envelope.error_bound == pytest.approx(0.02)
    assert envelope.value == pytest.approx(0.25, abs=envelope.error_bound)
    assert envelope.value <= 0.25 + 1e-6
    assert envelope.opaque_value == pytest.approx(0.25, abs=1e-7)


def test_envelope_of_a_linear_value_function():
    game = BayesianZeroSumGame([[[2.0]], [[-1.0]]], [0.3, 0.7])
    envelope = grid_envelope_oracle(game, 0.01)
    assert envelope.value == pytest.approx(0.3 * 2.0 - 0.7, abs=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_envelope_refinement_and_bracketing(seed):
    rng = lib.make_rng(seed, "envelope-game")
    game = BayesianZeroSumGame(rng.uniform(-1, 1, size=(3, 2, 2)), rng.dirichlet(np.ones(3)))
    full = evaluate_scheme_explicit(
        game, scheme_to_decomposition(game.prior, full_revelation_scheme(3))).total

    values = []
    # grids with 2, 4 and 8 steps are nested, so the optimum can only grow
    for resolution in (0.5, 0.25, 0.125):
        envelope = grid_envelope_oracle(game, resolution)
        opaque = envelope.opaque_value
        assert min(opaque, full) <= envelope.value + 1e-6
        assert envelope.value >= max(opaque, full) - envelope.error_bound - 1e-6
        values.append(envelope.value)
    assert values[0] <= values[1] + 1e-6 <= values[2] + 2e-6


def test_envelope_spacing_is_the_rounded_reciprocal():
    game = BayesianZeroSumGame([[[2.0]], [[-1.0]]], [0.3, 0.7])
    envelope = grid_envelope_oracle(game, 0.3)
    assert envelope.grid_points == 4
    assert envelope.error_bound == pytest.approx(game.lipschitz_constant / 3)


def test_envelope_grid_limits():
    game = BayesianZeroSumGame(np.zeros((6, 1, 1)), np.full(6, 1 / 6))
    with pytest.raises(InstanceTooLargeError):
        grid_envelope_oracle(game, 0.01)
    with pytest.raises(InvalidInputError):
        grid_envelope_oracle(game, 0.0)
