"""
Explicit Bayesian zero-sum games and the two equivalent representations of symmetric signaling
schemes: the state-by-signal matrix `phi`, and the convex decomposition of the prior into
posteriors (weights `alpha`, posteriors `x_sigma`).

All types are immutable after construction (their arrays are flagged read-only) and all functions
are pure.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space

import libsg as lib
from libsg import DimensionMismatchError, InconsistentDecompositionError, InvalidInputError

CONSTRUCTION_TOL = 1e-9
"""Tolerance for invariant checks performed when a value is constructed."""

CONSISTENCY_TOL = 1e-7
"""Tolerance for cross-operation checks (Bayes plausibility, round trips)."""

PRUNE_WEIGHT = 1e-12
"""Signals with a weight below this are dropped from convex decompositions."""


####################################################################################################

def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


####################################################################################################

@dataclass(frozen=True, eq=False)
class BayesianZeroSumGame:
    """
    A two-player zero-sum game whose payoffs depend on a state of nature drawn from `prior`.
    `payoffs[theta]` is the row player's r×c payoff matrix in state `theta`.
    """

    payoffs: np.ndarray
    prior: np.ndarray

    def __post_init__(self):
        payoffs = np.asarray(self.payoffs, dtype=float)
        if payoffs.ndim != 3 or min(payoffs.shape) == 0:
            raise InvalidInputError(
                f"payoffs: expected M nonempty r×c matrices, got shape {payoffs.shape}")
        if not np.all(np.isfinite(payoffs)):
            raise InvalidInputError("payoffs: all entries must be finite")
        prior = lib.check_probability_vector(self.prior, "prior", CONSTRUCTION_TOL)
        if prior.size != payoffs.shape[0]:
            raise DimensionMismatchError(
                f"prior has {prior.size} states but there are {payoffs.shape[0]} payoff matrices")
        object.__setattr__(self, "payoffs", _frozen(payoffs))
        object.__setattr__(self, "prior", _frozen(prior))

    @property
    def num_states(self) -> int:
        return self.payoffs.shape[0]

    @property
    def num_row_strategies(self) -> int:
        return self.payoffs.shape[1]

    @property
    def num_col_strategies(self) -> int:
        return self.payoffs.shape[2]

    @property
    def lipschitz_constant(self) -> float:
        """
        Coarse Lipschitz constant (in total variation) of the posterior value function:
        2 · max_theta ‖A^theta‖_∞ (largest absolute entry).
        """
        return 2.0 * float(np.abs(self.payoffs).max())

    # ----------------------------------------------------------------------------------------------

    def to_json(self) -> dict:
        r, c, m = self.num_row_strategies, self.num_col_strategies, self.num_states
        return {"r": r, "c": c, "M": m,
                "prior": self.prior.tolist(), "payoffs": self.payoffs.tolist()}

    @staticmethod
    def from_json(data: dict) -> "BayesianZeroSumGame":
        game = BayesianZeroSumGame(np.asarray(data["payoffs"], dtype=float), data["prior"])
        declared = (data.get("M"), data.get("r"), data.get("c"))
        actual = (game.num_states, game.num_row_strategies, game.num_col_strategies)
        for name, want, got in zip(("M", "r", "c"), declared, actual):
            if want is not None and want != got:
                raise DimensionMismatchError(f"game file declares {name}={want} but payoffs have {got}")
        return game


####################################################################################################

@dataclass(frozen=True, eq=False)
class SignalingScheme:
    """
    A symmetric signaling scheme: `phi[theta, sigma]` is the probability of announcing `sigma`
    when the state is `theta`.
    """

    phi: np.ndarray

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=float)
        if phi.ndim != 2 or min(phi.shape) == 0:
            raise InvalidInputError(f"phi: expected a nonempty M×|Σ| matrix, got shape {phi.shape}")
        if not np.all(np.isfinite(phi)) or phi.min() < -CONSTRUCTION_TOL:
            raise InvalidInputError("phi: entries must be finite and nonnegative")
        bad = np.flatnonzero(np.abs(phi.sum(axis=1) - 1.0) > CONSTRUCTION_TOL)
        if bad.size:
            raise InvalidInputError(f"phi: row {int(bad[0])} does not sum to 1")
        object.__setattr__(self, "phi", _frozen(np.clip(phi, 0.0, None)))

    @property
    def num_states(self) -> int:
        return self.phi.shape[0]

    @property
    def num_signals(self) -> int:
        return self.phi.shape[1]

    def to_json(self) -> dict:
        return {"M": self.num_states, "signals": self.num_signals, "phi": self.phi.tolist()}

    @staticmethod
    def from_json(data: dict) -> "SignalingScheme":
        scheme = SignalingScheme(np.asarray(data["phi"], dtype=float))
        if data.get("M", scheme.num_states) != scheme.num_states \
                or data.get("signals", scheme.num_signals) != scheme.num_signals:
            raise DimensionMismatchError("scheme file header does not match the shape of phi")
        return scheme


####################################################################################################

@dataclass(frozen=True, eq=False)
class ConvexDecomposition:
    """
    A scheme written as a convex decomposition of the prior: `alpha[sigma]` is the probability of
    signal `sigma` and `posteriors[sigma]` the posterior over states it induces.

    `prior` is the reference the decomposition must average to (Bayes plausibility). When omitted
    it is taken to be the weighted mean of the posteriors. Use :py:meth:`build` to drop
    zero-weight signals.
    """

    alpha: np.ndarray
    posteriors: np.ndarray
    prior: np.ndarray | None = None

    def __post_init__(self):
        alpha = lib.check_probability_vector(self.alpha, "alpha", CONSTRUCTION_TOL)
        posteriors = np.asarray(self.posteriors, dtype=float)
        if posteriors.ndim != 2 or posteriors.shape[0] != alpha.size:
            raise DimensionMismatchError(
                f"expected one posterior per signal ({alpha.size}), got shape {posteriors.shape}")
        for sigma, row in enumerate(posteriors):
            lib.check_probability_vector(row, f"posterior {sigma}", CONSTRUCTION_TOL)
        mean = alpha @ posteriors
        prior = mean if self.prior is None else np.asarray(self.prior, dtype=float)
        if prior.shape != mean.shape:
            raise DimensionMismatchError(
                f"prior has {prior.size} states but posteriors have {mean.size}")
        gap = float(np.abs(mean - prior).max())
        if gap > CONSISTENCY_TOL:
            raise InconsistentDecompositionError(
                f"weighted posteriors differ from the prior by {gap:.3g} (Bayes plausibility)")
        object.__setattr__(self, "alpha", _frozen(alpha))
        object.__setattr__(self, "posteriors", _frozen(np.clip(posteriors, 0.0, None)))
        object.__setattr__(self, "prior", _frozen(prior))

    @staticmethod
    def build(alpha, posteriors, prior=None) -> "ConvexDecomposition":
        """
        Constructs a decomposition after pruning signals whose weight is below
        :py:data:`PRUNE_WEIGHT`, renormalizing the remaining weights.
        """
        alpha = np.asarray(alpha, dtype=float)
        posteriors = np.asarray(posteriors, dtype=float)
        keep = alpha >= PRUNE_WEIGHT
        alpha = alpha[keep]
        return ConvexDecomposition(alpha / alpha.sum(), posteriors[keep], prior)

    @property
    def num_signals(self) -> int:
        return self.alpha.size

    @property
    def num_states(self) -> int:
        return self.posteriors.shape[1]

    def supports(self) -> list[np.ndarray]:
        """Indices of the states with positive posterior mass, per signal."""
        return [np.flatnonzero(row > 0) for row in self.posteriors]

    def to_json(self) -> dict:
        return {"alpha": self.alpha.tolist(), "posteriors": self.posteriors.tolist()}

    @staticmethod
    def from_json(data: dict, prior=None) -> "ConvexDecomposition":
        return ConvexDecomposition.build(data["alpha"], data["posteriors"], prior)


####################################################################################################

def scheme_to_decomposition(game_prior, scheme: SignalingScheme) -> ConvexDecomposition:
    """
    alpha_sigma = Σ_theta π(theta) φ(theta, sigma) and
    x_sigma(theta) = π(theta) φ(theta, sigma) / alpha_sigma. Zero-weight signals are dropped.
    """
    prior = lib.check_probability_vector(game_prior, "prior", CONSTRUCTION_TOL)
    if prior.size != scheme.num_states:
        raise DimensionMismatchError(
            f"scheme has {scheme.num_states} states but the prior has {prior.size}")
    joint = prior[:, None] * scheme.phi
    alpha = joint.sum(axis=0)
    keep = alpha >= PRUNE_WEIGHT
    posteriors = (joint[:, keep] / alpha[keep]).T
    return ConvexDecomposition(alpha[keep] / alpha[keep].sum(), posteriors, prior)


####################################################################################################

def decomposition_to_scheme(prior, dec: ConvexDecomposition) -> SignalingScheme:
    """
    Inverse map φ(theta, sigma) = alpha_sigma x_sigma(theta) / π(theta). States with zero prior
    mass get a uniform row (their row never affects behavior).
    """
    prior = lib.check_probability_vector(prior, "prior", CONSTRUCTION_TOL)
    if prior.size != dec.num_states:
        raise DimensionMismatchError(
            f"decomposition has {dec.num_states} states but the prior has {prior.size}")
    gap = float(np.abs(dec.alpha @ dec.posteriors - prior).max())
    if gap > CONSISTENCY_TOL:
        raise InconsistentDecompositionError(
            f"decomposition does not average to the prior (gap {gap:.3g})")

    joint = (dec.alpha[:, None] * dec.posteriors).T
    phi = np.full_like(joint, 1.0 / dec.num_signals)
    positive = prior > 0
    phi[positive] = joint[positive] / prior[positive, None]
    # absorb the tolerated rounding so rows are exact distributions
    phi = np.clip(phi, 0.0, None)
    phi /= phi.sum(axis=1, keepdims=True)
    return SignalingScheme(phi)


####################################################################################################

def expected_matrix(game: BayesianZeroSumGame, posterior) -> np.ndarray:
    """
    Posterior expected payoff matrix E_{theta ~ posterior}[A^theta].
    """
    x = lib.check_probability_vector(posterior, "posterior", CONSTRUCTION_TOL)
    if x.size != game.num_states:
        raise DimensionMismatchError(
            f"posterior has {x.size} entries but the game has {game.num_states} states")
    return np.tensordot(x, game.payoffs, axes=1)


####################################################################################################

def mix_schemes(scheme_a: SignalingScheme, scheme_b: SignalingScheme, weight: float) \
        -> SignalingScheme:
    """
    Runs `scheme_a` with probability `weight` and `scheme_b` otherwise, over the disjoint union of
    their signals (a's signals first). Every subgame is unchanged, so the row player's utility is
    affine in `weight`.
    """
    if scheme_a.num_states != scheme_b.num_states:
        raise DimensionMismatchError(
            f"cannot mix schemes over {scheme_a.num_states} and {scheme_b.num_states} states")
    if not 0.0 <= weight <= 1.0:
        raise InvalidInputError(f"mixing weight must lie in [0, 1], got {weight}")
    return SignalingScheme(np.hstack([weight * scheme_a.phi, (1.0 - weight) * scheme_b.phi]))


def weight_for_target(utility_a: float, utility_b: float, target: float) -> float:
    """
    Mixing weight on scheme a that makes `mix_schemes` reach `target` utility, clamped to [0, 1].
    """
    if utility_a == utility_b:
        return 1.0
    return min(1.0, max(0.0, (target - utility_b) / (utility_a - utility_b)))


####################################################################################################

def opaque_scheme(num_states: int) -> SignalingScheme:
    """The single-signal scheme: the posterior is always the prior."""
    return SignalingScheme(np.ones((num_states, 1)))


def full_revelation_scheme(num_states: int) -> SignalingScheme:
    """The identity scheme: every posterior is a point mass."""
    return SignalingScheme(np.eye(num_states))


####################################################################################################

def reduce_signals(dec: ConvexDecomposition, values) -> ConvexDecomposition:
    """
    Carathéodory reduction to at most M+1 signals.

    `values[sigma]` is the objective value of signal `sigma`. While there are more than M+1
    signals, the columns (x_sigma, values_sigma) are linearly dependent; moving the weights along
    a null vector until one hits zero keeps Σ alpha_sigma x_sigma and Σ alpha_sigma values_sigma
    unchanged.
    """
    values = np.asarray(values, dtype=float)
    if values.shape != dec.alpha.shape:
        raise DimensionMismatchError(
            f"expected {dec.num_signals} signal values, got shape {values.shape}")

    alpha = dec.alpha.copy()
    active = np.arange(dec.num_signals)
    limit = dec.num_states + 1

    while active.size > limit:
        # Only look at limit+1 signals at a time: a null vector always exists among them.
        chunk = active[:limit + 1]
        system = np.vstack([dec.posteriors[chunk].T, values[chunk]])
        direction = null_space(system)[:, 0]
        # Posterior rows sum to 1, so Σ direction = 0 and both signs appear.
        if direction.max() <= 0:
            direction = -direction
        positive = direction > 1e-15
        ratios = alpha[chunk][positive] / direction[positive]
        blocking = chunk[positive][np.argmin(ratios)]
        alpha[chunk] -= ratios.min() * direction
        alpha[blocking] = 0.0
        alpha[alpha < PRUNE_WEIGHT] = 0.0
        active = active[alpha[active] > 0]

    lib.debug(f"reduced {dec.num_signals} signals to {active.size}")
    return ConvexDecomposition(alpha[active] / alpha[active].sum(), dec.posteriors[active],
                               dec.prior)

####################################################################################################
