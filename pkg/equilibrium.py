"""
Minimax equilibria: a generic LP for explicit matrix games, and the reduced LP for the network
security game.

In the security game the state of nature is a vertex theta, the attacker picks a vertex a and the
defender a set D of at most d vertices. The attacker earns 1 if {theta, a} is an edge, and loses
rho for each of theta and a that is defended (a vertex counted twice when theta = a). Given a
posterior x, an attacker mix y and a defender marginal z in P_d = {z ∈ [0,1]^n : Σz ≤ d}, the
attacker's payoff is the bilinear form x^T A y − rho (z^T x + z^T y).

Against a fixed y, the defender's best z puts 1 on the d largest entries of x + y, so the
subgame value is max_y [x^T A y − rho · topd(x + y)]. Writing topd(w) = min_{t, s >= 0}
{d t + Σ s_i : t + s_i >= w_i} turns this into a single LP with 2n+1 variables, avoiding the
C(n, d) defender strategies altogether. :py:func:`solve_security_exact_small` enumerates them
anyway, as a correctness oracle on small instances.
"""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

import libsg as lib
from graphs import Graph
from libsg import DimensionMismatchError, InstanceTooLargeError, InvalidInputError, SolverError

GAP_TOL = 1e-6
"""Maximum tolerated gap between the max-min and min-max values of a solved game."""

EXACT_LIMIT = 10**5
"""Maximum number of defender pure strategies enumerated by the exact oracle."""


####################################################################################################

def solve_lp(descr: str, method: str = "highs", **kwargs):
    """
    Runs HiGHS and raises :py:class:`SolverError` (with whatever residuals are known) unless it
    reports an optimal solution.
    """
    res = linprog(method=method, **kwargs)
    if res.status != 0:
        residuals = {}
        if res.x is not None and kwargs.get("A_eq") is not None:
            residuals["eq"] = float(np.abs(kwargs["A_eq"] @ res.x - kwargs["b_eq"]).max())
        raise SolverError(descr, res.status, res.message, residuals)
    return res


def _as_distribution(v: np.ndarray) -> np.ndarray:
    """Clips LP round-off and renormalizes."""
    v = np.clip(v, 0.0, None)
    return v / v.sum()


####################################################################################################

@dataclass
class MatrixGameSolution:
    value: float
    """Max-min value of the row player (the maximizer)."""

    row_strategy: np.ndarray
    col_strategy: np.ndarray

    dual_value: float
    """Min-max value, from the column player's LP."""

    @property
    def gap(self) -> float:
        return abs(self.value - self.dual_value)


def solve_matrix_game(a) -> MatrixGameSolution:
    """
    Solves the zero-sum game with row-player payoff matrix `a` (row player maximizes) by solving
    both players' LPs.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.size == 0 or not np.all(np.isfinite(a)):
        raise InvalidInputError(f"payoff matrix must be finite and nonempty, got shape {a.shape}")
    r, c = a.shape

    # row player: max v  s.t.  (a^T y)_j >= v for all j, y in the simplex
    row = solve_lp(
        "solve the row player's LP",
        c=np.r_[np.zeros(r), -1.0],
        A_ub=np.hstack([-a.T, np.ones((c, 1))]),
        b_ub=np.zeros(c),
        A_eq=np.r_[np.ones(r), 0.0][None, :],
        b_eq=[1.0],
        bounds=[(0, None)] * r + [(None, None)])

    # column player: min w  s.t.  (a q)_i <= w for all i, q in the simplex
    col = solve_lp(
        "solve the column player's LP",
        c=np.r_[np.zeros(c), 1.0],
        A_ub=np.hstack([a, -np.ones((r, 1))]),
        b_ub=np.zeros(r),
        A_eq=np.r_[np.ones(c), 0.0][None, :],
        b_eq=[1.0],
        bounds=[(0, None)] * c + [(None, None)])

    solution = MatrixGameSolution(
        value=float(row.x[-1]),
        row_strategy=_as_distribution(row.x[:r]),
        col_strategy=_as_distribution(col.x[:c]),
        dual_value=float(col.x[-1]))
    if solution.gap > GAP_TOL:
        raise SolverError("close the duality gap", 0, "primal and dual values disagree",
                          {"gap": solution.gap})
    return solution


####################################################################################################

@dataclass(eq=False)
class SecurityGame:
    """
    The network security game on `graph` with defense budget `d` and protection reward `rho`.
    The prior over states (vertices) defaults to uniform.
    """

    graph: Graph
    d: int
    rho: float
    prior: np.ndarray | None = None

    def __post_init__(self):
        n = self.graph.n
        if not 1 <= self.d <= n:
            raise InvalidInputError(f"defense budget must satisfy 1 <= d <= n={n}, got {self.d}")
        if self.rho < 0:
            raise InvalidInputError(f"protection reward must be nonnegative, got {self.rho}")
        prior = np.full(n, 1.0 / n) if self.prior is None else self.prior
        prior = lib.check_probability_vector(prior, "prior", 1e-9)
        if prior.size != n:
            raise DimensionMismatchError(f"prior over {prior.size} states for a graph on {n}")
        self.prior = prior

    @property
    def n(self) -> int:
        return self.graph.n


@dataclass
class EquilibriumResult:
    value: float
    attacker_strategy: np.ndarray
    defender_marginal: np.ndarray
    defender_decomposition: list[tuple[float, frozenset[int]]] = field(default_factory=list)
    dual_value: float = float("nan")
    """Value guaranteed by `defender_marginal` (the min-max side)."""

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "y": self.attacker_strategy.tolist(),
            "z": self.defender_marginal.tolist(),
            "decomposition": [[w, sorted(s)] for w, s in self.defender_decomposition],
        }


####################################################################################################

def _check_vectors(n: int, **vectors):
    for name, v in vectors.items():
        if np.shape(v) != (n,):
            raise DimensionMismatchError(f"{name} must have length {n}, got shape {np.shape(v)}")


def security_payoff(g: Graph, rho: float, x, y, z) -> float:
    """
    Attacker payoff x^T A y − rho (z^T x + z^T y). Membership of z in P_d is not enforced.
    """
    _check_vectors(g.n, x=x, y=y, z=z)
    x, y, z = (np.asarray(v, dtype=float) for v in (x, y, z))
    return g.bilinear(x, y) - rho * (z @ x + z @ y)


def defender_best_response(x, y, d: int) -> tuple[int, ...]:
    """
    The d vertices with the largest x + y (ties to the smallest index), in increasing order.
    """
    w = np.asarray(x, dtype=float) + np.asarray(y, dtype=float)
    order = np.argsort(-w, kind="stable")
    return tuple(sorted(int(v) for v in order[:d]))


def topd_sum(w, d: int) -> float:
    """Sum of the d largest entries of w."""
    return float(np.sort(np.asarray(w, dtype=float))[::-1][:d].sum())


def topd_sum_lp(w, d: int) -> float:
    """
    topd(w) through its epigraph LP, min {d t + Σ s_i : t + s_i >= w_i, s >= 0}. Used to check
    the reformulation behind :py:func:`solve_security_subgame`.
    """
    w = np.asarray(w, dtype=float)
    n = w.size
    res = solve_lp(
        "solve the sum-of-top-d LP",
        c=np.r_[np.ones(n), float(d)],
        A_ub=sp.hstack([-sp.eye(n), sp.csr_matrix(-np.ones((n, 1)))], format="csr"),
        b_ub=-w,
        bounds=[(0, None)] * n + [(None, None)])
    return float(res.fun)


####################################################################################################

def solve_security_subgame(game: SecurityGame, x) -> EquilibriumResult:
    """
    Equilibrium of the security subgame at posterior `x`.

    Attacker LP over (y, s, t):
        max  (A x)^T y − rho (d t + Σ s_i)   s.t.  t + s_i >= x_i + y_i,  s >= 0,  y in the simplex.
    Defender LP over (z, mu):
        min  mu − rho x^T z   s.t.  (A x)_i − rho z_i <= mu,  0 <= z <= 1,  Σ z <= d.
    The two values agree (LP duality); the gap is checked.
    """
    n, d, rho = game.n, game.d, game.rho
    x = lib.check_probability_vector(x, "posterior", 1e-9)
    _check_vectors(n, posterior=x)
    scores = game.graph.matvec(x)
    eye = sp.eye(n, format="csr")
    ones = sp.csr_matrix(np.ones((n, 1)))

    attacker = solve_lp(
        "solve the attacker's security LP",
        c=np.r_[-scores, rho * np.ones(n), rho * d],
        A_ub=sp.hstack([-eye, -eye, -ones], format="csr"),
        b_ub=-x,
        A_eq=sp.csr_matrix(np.r_[np.ones(n), np.zeros(n + 1)][None, :]),
        b_eq=[1.0],
        bounds=[(0, None)] * (2 * n) + [(None, None)])
    value = -float(attacker.fun)
    y = _as_distribution(attacker.x[:n])

    defender = solve_lp(
        "solve the defender's security LP",
        c=np.r_[-rho * x, 1.0],
        A_ub=sp.vstack([
            sp.hstack([-rho * eye, -ones]),
            sp.csr_matrix(np.r_[np.ones(n), 0.0][None, :]),
        ], format="csr"),
        b_ub=np.r_[-scores, float(d)],
        bounds=[(0, 1)] * n + [(None, None)])
    dual_value = float(defender.fun)
    z = np.clip(defender.x[:n], 0.0, 1.0)
    if z.sum() > d:
        z *= d / z.sum()

    if abs(value - dual_value) > GAP_TOL:
        raise SolverError("close the security game duality gap", 0,
                          "attacker and defender values disagree",
                          {"gap": abs(value - dual_value)})

    lib.debug(f"security subgame: value={value:.6f} gap={abs(value - dual_value):.2e}")
    return EquilibriumResult(
        value=value,
        attacker_strategy=y,
        defender_marginal=z,
        defender_decomposition=decompose_matroid_point(z, d),
        dual_value=dual_value)


####################################################################################################

def security_game_matrix(game: SecurityGame, x) -> tuple[np.ndarray, list[tuple[int, ...]]]:
    """
    The explicit attacker-by-defense-set payoff matrix of the subgame at posterior `x`:
    entry (a, D) = (A x)_a − rho (x(D) + 1[a ∈ D]). Returns it with the list of sets D.
    """
    n, d = game.n, game.d
    count = math.comb(n, d)
    if count > EXACT_LIMIT:
        raise InstanceTooLargeError(
            f"C({n}, {d}) = {count} defender strategies exceeds the limit of {EXACT_LIMIT}")
    x = np.asarray(x, dtype=float)
    _check_vectors(n, posterior=x)
    scores = game.graph.matvec(x)
    sets = list(itertools.combinations(range(n), d))
    matrix = np.empty((n, count))
    for j, defended in enumerate(sets):
        indicator = np.zeros(n)
        indicator[list(defended)] = 1.0
        matrix[:, j] = scores - game.rho * (x @ indicator + indicator)
    return matrix, sets


@dataclass
class ExactSecurityResult:
    value: float
    attacker_strategy: np.ndarray
    defender_mix: list[tuple[float, frozenset[int]]]


def solve_security_exact_small(game: SecurityGame, x) -> ExactSecurityResult:
    """
    Solves the subgame at posterior `x` as an explicit matrix game over all C(n, d) defense sets.
    """
    matrix, sets = security_game_matrix(game, x)
    solution = solve_matrix_game(matrix)
    mix = [(float(w), frozenset(s)) for w, s in zip(solution.col_strategy, sets) if w > 1e-12]
    return ExactSecurityResult(solution.value, solution.row_strategy, mix)


####################################################################################################

def decompose_matroid_point(z, d: int) -> list[tuple[float, frozenset[int]]]:
    """
    Writes z ∈ P_d as a convex combination of indicators of sets of size at most d.

    Lay the coordinates of z end to end as intervals of [0, Σz). For an offset u ∈ [0, 1), the
    comb u, u+1, u+2, ... hits at most one point per interval (each has length <= 1) and at most
    ⌈Σz⌉ <= d intervals in total; interval i is hit for a set of offsets of measure z_i. The hit
    set only changes at the fractional parts of the interval endpoints, giving at most n+1
    pieces, each weighted by its length.
    """
    z = np.asarray(z, dtype=float)
    if z.ndim != 1:
        raise InvalidInputError(f"z must be a vector, got shape {z.shape}")
    if z.min(initial=0.0) < -1e-7 or z.max(initial=0.0) > 1 + 1e-7 or z.sum() > d + 1e-7:
        raise InvalidInputError(f"z is outside the polytope P_{d} (sum {z.sum():.9g})")
    z = np.clip(z, 0.0, 1.0)
    total = z.sum()
    if total > d:
        z *= d / total
        total = z.sum()

    ends = np.r_[0.0, np.cumsum(z)]
    cuts = np.unique(np.r_[0.0, 1.0, np.mod(ends, 1.0)])
    pieces = {}
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        width = hi - lo
        if width <= 1e-15:
            continue
        comb = (lo + hi) / 2 + np.arange(math.ceil(total) + 1)
        comb = comb[comb < ends[-1]]
        hit = np.searchsorted(ends, comb, side="right") - 1
        chosen = frozenset(int(i) for i in hit)
        pieces[chosen] = pieces.get(chosen, 0.0) + width

    return [(w, s) for s, w in sorted(pieces.items(), key=lambda item: (-item[1], sorted(item[0])))]

####################################################################################################
