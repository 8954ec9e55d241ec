import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from game import (BayesianZeroSumGame, ConvexDecomposition, SignalingScheme,
                  decomposition_to_scheme, expected_matrix, full_revelation_scheme, mix_schemes,
                  opaque_scheme, reduce_signals, scheme_to_decomposition, weight_for_target)
from libsg import DimensionMismatchError, InconsistentDecompositionError, InvalidInputError


####################################################################################################
# Scheme <-> decomposition

def test_two_signal_decomposition():
    dec = scheme_to_decomposition([0.5, 0.5], SignalingScheme([[1.0, 0.0], [0.5, 0.5]]))
    assert dec.alpha == pytest.approx([0.75, 0.25])
    assert dec.posteriors[0] == pytest.approx([2 / 3, 1 / 3])
    assert dec.posteriors[1] == pytest.approx([0.0, 1.0])


def test_opaque_and_full_revelation():
    prior = np.array([0.2, 0.3, 0.5])
    opaque = scheme_to_decomposition(prior, opaque_scheme(3))
    assert opaque.alpha == pytest.approx([1.0])
    assert opaque.posteriors[0] == pytest.approx(prior)

    full = scheme_to_decomposition(prior, full_revelation_scheme(3))
    assert full.alpha == pytest.approx(prior)
    assert full.posteriors == pytest.approx(np.eye(3))


def test_zero_weight_signals_are_dropped():
    phi = [[0.5, 0.0, 0.5], [1.0, 0.0, 0.0]]
    dec = scheme_to_decomposition([0.5, 0.5], SignalingScheme(phi))
    assert dec.num_signals == 2
    assert dec.alpha.sum() == pytest.approx(1.0)


def test_round_trip_of_the_example():
    phi = np.array([[1.0, 0.0], [0.5, 0.5]])
    dec = scheme_to_decomposition([0.5, 0.5], SignalingScheme(phi))
    back = decomposition_to_scheme([0.5, 0.5], dec)
    assert back.phi == pytest.approx(phi, abs=1e-9)


@st.composite
def schemes_with_priors(draw):
    states = draw(st.integers(1, 5))
    signals = draw(st.integers(1, 5))
    weights = st.floats(0.05, 1.0)
    phi = np.array(draw(st.lists(st.lists(weights, min_size=signals, max_size=signals),
                                 min_size=states, max_size=states)))
    prior = np.array(draw(st.lists(weights, min_size=states, max_size=states)))
    return phi / phi.sum(axis=1, keepdims=True), prior / prior.sum()


@given(schemes_with_priors())
def test_round_trip_recovers_phi(data):
    phi, prior = data
    dec = scheme_to_decomposition(prior, SignalingScheme(phi))
    assert dec.alpha @ dec.posteriors == pytest.approx(prior, abs=1e-7)
    back = decomposition_to_scheme(prior, dec)
    assert np.abs(back.phi - phi).max() <= 1e-7


def test_decomposition_must_average_to_the_prior():
    with pytest.raises(InconsistentDecompositionError):
        ConvexDecomposition([0.5, 0.5], [[1.0, 0.0], [1.0, 0.0]], prior=[0.5, 0.5])
    with pytest.raises(InconsistentDecompositionError):
        decomposition_to_scheme([0.5, 0.5], ConvexDecomposition([1.0], [[0.9, 0.1]]))


def test_build_prunes_tiny_weights():
    dec = ConvexDecomposition.build([1.0, 1e-14], [[0.5, 0.5], [1.0, 0.0]])
    assert dec.num_signals == 1
    assert dec.supports()[0].tolist() == [0, 1]


####################################################################################################
# Validation

def test_invalid_phi():
    with pytest.raises(InvalidInputError):
        SignalingScheme([[0.5, 0.4]])
    with pytest.raises(InvalidInputError):
        SignalingScheme([[1.5, -0.5]])
    with pytest.raises(InvalidInputError):
        SignalingScheme([[np.nan, 1.0]])


def test_invalid_games():
    with pytest.raises(InvalidInputError):
        BayesianZeroSumGame(np.zeros((2, 2)), [0.5, 0.5])
    with pytest.raises(DimensionMismatchError):
        BayesianZeroSumGame(np.zeros((3, 2, 2)), [0.5, 0.5])
    with pytest.raises(InvalidInputError):
        BayesianZeroSumGame(np.zeros((2, 2, 2)), [0.7, 0.7])


def test_game_json_header_is_checked():
    game = BayesianZeroSumGame(np.ones((2, 3, 4)), [0.25, 0.75])
    data = game.to_json()
    assert BayesianZeroSumGame.from_json(data).payoffs.shape == (2, 3, 4)
    data["r"] = 5
    with pytest.raises(DimensionMismatchError):
        BayesianZeroSumGame.from_json(data)


def test_values_are_read_only():
    dec = ConvexDecomposition([1.0], [[0.5, 0.5]])
    with pytest.raises(ValueError):
        dec.alpha[0] = 0.5


####################################################################################################
# Expected matrices and mixing

def test_expected_matrix():
    payoffs = np.array([[[1.0, 0.0], [0.0, 1.0]], [[0.0, 1.0], [1.0, 0.0]]])
    game = BayesianZeroSumGame(payoffs, [0.5, 0.5])
    assert expected_matrix(game, [0.5, 0.5]) == pytest.approx(np.full((2, 2), 0.5))
    assert expected_matrix(game, [1.0, 0.0]) == pytest.approx(np.eye(2))
    with pytest.raises(DimensionMismatchError):
        expected_matrix(game, [1.0])


def test_mix_schemes_keeps_both_sets_of_signals():
    mixed = mix_schemes(opaque_scheme(2), full_revelation_scheme(2), 0.25)
    assert mixed.num_signals == 3
    assert mixed.phi == pytest.approx([[0.25, 0.75, 0.0], [0.25, 0.0, 0.75]])
    with pytest.raises(InvalidInputError):
        mix_schemes(opaque_scheme(2), opaque_scheme(2), 1.5)
    with pytest.raises(DimensionMismatchError):
        mix_schemes(opaque_scheme(2), opaque_scheme(3), 0.5)


def test_weight_for_target():
    assert weight_for_target(1.0, 0.0, 0.25) == pytest.approx(0.25)
    assert weight_for_target(0.0, 1.0, 0.25) == pytest.approx(0.75)
    assert weight_for_target(1.0, 0.0, 2.0) == 1.0
    assert weight_for_target(1.0, 0.0, -1.0) == 0.0
    assert weight_for_target(0.5, 0.5, 0.3) == 1.0


####################################################################################################
# Carathéodory reduction

def test_reduce_signals_keeps_mean_and_objective():
    t = np.linspace(0.05, 0.95, 6)
    posteriors = np.column_stack([t, 1 - t])
    alpha = np.full(6, 1 / 6)
    values = t * (1 - t)
    dec = ConvexDecomposition(alpha, posteriors)

    reduced = reduce_signals(dec, values)
    assert reduced.num_signals <= 3
    assert reduced.alpha @ reduced.posteriors == pytest.approx(dec.prior, abs=1e-9)
    kept = [int(np.argmin(np.abs(t - x[0]))) for x in reduced.posteriors]
    assert reduced.alpha @ values[kept] == pytest.approx(alpha @ values, abs=1e-9)


def test_reduce_signals_leaves_small_schemes_alone():
    dec = ConvexDecomposition([0.5, 0.5], [[1.0, 0.0], [0.0, 1.0]])
    reduced = reduce_signals(dec, [1.0, 2.0])
    assert reduced.alpha == pytest.approx(dec.alpha)
    with pytest.raises(DimensionMismatchError):
        reduce_signals(dec, [1.0])

####################################################################################################
