"""
Undirected graphs stored as dense packed-bit adjacency matrices, density measures, and the random
graph generators of the planted clique / planted clique cover problems.

At n = 25000 a graph costs n·⌈n/8⌉ bytes (~78 MB); intersecting two neighborhoods is a bytewise
AND over ⌈n/8⌉ bytes.
"""

from dataclasses import dataclass, field

import numpy as np

import libsg as lib
from libsg import InvalidInputError

_POPCOUNT = np.array([bin(i).count("1") for i in range(256)], dtype=np.int64)
"""Number of set bits of every byte value."""

_BLOCK_ROWS = 1024
"""Rows processed per block when generating, unpacking or transposing adjacency bits."""


####################################################################################################

class Graph:
    """
    A simple undirected graph over vertices `0..n-1`. `bits[u]` is row `u` of the adjacency
    matrix packed with `np.packbits` (most significant bit first). Treat as immutable: the
    generators below are the only code writing to `bits`, before handing the graph out.
    """

    def __init__(self, n: int, bits: np.ndarray | None = None):
        if n < 1:
            raise InvalidInputError(f"a graph needs at least one vertex, got n={n}")
        self.n = n
        self.row_bytes = (n + 7) // 8
        if bits is None:
            bits = np.zeros((n, self.row_bytes), dtype=np.uint8)
        elif bits.shape != (n, self.row_bytes) or bits.dtype != np.uint8:
            raise InvalidInputError(
                f"adjacency bits must be uint8 of shape {(n, self.row_bytes)}, got {bits.shape}")
        self.bits = bits
        self._m = None

    # ----------------------------------------------------------------------------------------------

    @staticmethod
    def from_dense(adjacency) -> "Graph":
        """
        Builds a graph from a dense boolean matrix, which must be symmetric with an empty diagonal.
        """
        a = np.asarray(adjacency, dtype=bool)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InvalidInputError(f"adjacency must be square, got shape {a.shape}")
        if not np.array_equal(a, a.T):
            raise InvalidInputError("adjacency must be symmetric")
        if a.diagonal().any():
            raise InvalidInputError("adjacency must not contain self-loops")
        return Graph(a.shape[0], np.packbits(a, axis=1))

    @staticmethod
    def from_edges(n: int, edges) -> "Graph":
        """
        Builds a graph from an iterable of `(u, v)` pairs. Duplicates are harmless; self-loops
        are rejected.
        """
        g = Graph(n)
        for u, v in edges:
            g._add_edge(int(u), int(v))
        return g

    def copy(self) -> "Graph":
        return Graph(self.n, self.bits.copy())

    def _add_edge(self, u: int, v: int):
        if u == v:
            raise InvalidInputError(f"self-loop on vertex {u}")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise InvalidInputError(f"edge ({u}, {v}) out of range for n={self.n}")
        self.bits[u, v >> 3] |= np.uint8(0x80 >> (v & 7))
        self.bits[v, u >> 3] |= np.uint8(0x80 >> (u & 7))
        self._m = None

    # ----------------------------------------------------------------------------------------------

    @property
    def m(self) -> int:
        """Number of edges."""
        if self._m is None:
            self._m = int(_POPCOUNT[self.bits].sum()) // 2
        return self._m

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.bits[u, v >> 3] & (0x80 >> (v & 7)))

    def neighbors(self, u: int) -> np.ndarray:
        return np.flatnonzero(self.unpack_rows([u])[0])

    def degrees(self) -> np.ndarray:
        return _POPCOUNT[self.bits].sum(axis=1)

    def mask(self, vertices) -> np.ndarray:
        """Packed indicator row of the given vertex set."""
        indicator = np.zeros(self.n, dtype=bool)
        indicator[np.asarray(list(vertices), dtype=np.int64)] = True
        return np.packbits(indicator)

    def count_into(self, rows, vertices) -> np.ndarray:
        """
        For each vertex in `rows`, the number of its neighbors inside `vertices`.
        """
        rows = np.asarray(list(rows), dtype=np.int64)
        return _POPCOUNT[self.bits[rows] & self.mask(vertices)].sum(axis=1)

    def unpack_rows(self, rows) -> np.ndarray:
        """Dense 0/1 rows (uint8) of the adjacency matrix for the given vertices."""
        rows = np.asarray(rows, dtype=np.int64)
        return np.unpackbits(self.bits[rows], axis=1, count=self.n)

    def to_dense(self) -> np.ndarray:
        return self.unpack_rows(np.arange(self.n)).astype(bool)

    def matvec(self, y) -> np.ndarray:
        """
        A @ y. Only the rows on the support of `y` are unpacked (A is symmetric), so this is cheap
        for the sparse posteriors and strategies used throughout.
        """
        y = np.asarray(y, dtype=float)
        if y.shape != (self.n,):
            raise lib.DimensionMismatchError(f"vector of length {y.size} for a graph on {self.n}")
        support = np.flatnonzero(y)
        out = np.zeros(self.n)
        for start in range(0, support.size, _BLOCK_ROWS):
            block = support[start:start + _BLOCK_ROWS]
            out += y[block] @ self.unpack_rows(block)
        return out

    def bilinear(self, x, y) -> float:
        """x^T A y."""
        return float(np.asarray(x, dtype=float) @ self.matvec(y))

    def edges(self):
        """Yields the edges `(u, v)` with `u < v` in lexicographic order."""
        for start in range(0, self.n, _BLOCK_ROWS):
            rows = np.arange(start, min(start + _BLOCK_ROWS, self.n))
            dense = self.unpack_rows(rows)
            for offset, u in enumerate(rows):
                for v in np.flatnonzero(dense[offset, u + 1:]):
                    yield int(u), int(u + 1 + v)

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n \
            and np.array_equal(self.bits, other.bits)

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


####################################################################################################

@dataclass
class PlantedCoverParams:
    n: int
    p: float
    k: int
    r: int

    def to_json(self) -> dict:
        return {"n": self.n, "p": self.p, "k": self.k, "r": self.r}


@dataclass
class PlantedCoverInstance:
    """
    A graph with its hidden ground truth: the background G(n, p) edges and the planted cliques.
    Recovery code only ever sees `graph`; the rest is for scoring and validation.
    """

    graph: Graph
    background: Graph | None
    """A− (the G(n, p) step); None when unknown (e.g. an amplified instance read from disk)."""
    planted_cliques: list[frozenset[int]]
    params: PlantedCoverParams
    seed: int
    generator: str = "planted_cover"
    notes: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.graph.n

    def foreground_edge_count(self) -> int:
        """Number of edges of A+ = A − A−."""
        return self.graph.m - self.background.m

    def covered_vertices(self) -> set[int]:
        return set().union(*self.planted_cliques) if self.planted_cliques else set()


####################################################################################################

def _check_probability(p: float):
    if not 0.0 <= p <= 1.0:
        raise InvalidInputError(f"edge probability must lie in [0, 1], got {p}")


def symmetrize_upper(bits: np.ndarray, n: int):
    """
    In place: given packed rows holding only upper-triangle bits (v > u), ORs in the transpose,
    one square tile at a time.
    """
    for a in range(0, n, _BLOCK_ROWS):
        a_end = min(a + _BLOCK_ROWS, n)
        upper = np.unpackbits(bits[a:a_end], axis=1, count=n)
        for c in range(a, n, _BLOCK_ROWS):
            c_end = min(c + _BLOCK_ROWS, n)
            tile = upper[:, c:c_end].T
            if not tile.any():
                continue
            # columns a..a_end of rows c..c_end; `a` is a multiple of 8 since _BLOCK_ROWS is, so the
            # tile starts on a byte boundary and only the padding bits past n share its last byte
            byte_cols = slice(a // 8, (a_end + 7) // 8)
            dense = np.unpackbits(bits[c:c_end, byte_cols], axis=1, count=a_end - a)
            dense |= tile
            bits[c:c_end, byte_cols] = np.packbits(dense, axis=1)


def gen_gnp(n: int, p: float, seed: int, tag: str = "gnp") -> Graph:
    """
    Erdős–Rényi G(n, p): every unordered pair is an edge independently with probability p.

    Rows are drawn in order from one Philox stream (`tag`), each row drawing n uniforms of which
    only the entries v > u are used, so the output is a pure function of (n, p, seed).
    """
    if n < 1:
        raise InvalidInputError(f"n must be at least 1, got {n}")
    _check_probability(p)
    rng = lib.make_rng(seed, tag)
    bits = np.zeros((n, (n + 7) // 8), dtype=np.uint8)
    columns = np.arange(n)
    for start in range(0, n, _BLOCK_ROWS):
        rows = np.arange(start, min(start + _BLOCK_ROWS, n))
        draws = rng.random((rows.size, n)) < p
        draws &= columns[None, :] > rows[:, None]
        bits[rows] = np.packbits(draws, axis=1)
    symmetrize_upper(bits, n)
    return Graph(n, bits)


####################################################################################################

def _plant_clique(g: Graph, clique: np.ndarray):
    mask = g.mask(clique)
    g.bits[clique] |= mask
    for u in clique:
        g.bits[u, u >> 3] &= np.uint8(~(0x80 >> (u & 7)) & 0xFF)
    g._m = None


def _draw_cliques(n: int, k: int, count: int, seed: int, tag: str) -> list[frozenset[int]]:
    rng = lib.make_rng(seed, tag)
    return [frozenset(int(v) for v in lib.partial_shuffle(rng, n, k)) for _ in range(count)]


def _check_clique_params(n: int, k: int, r: int):
    if not 1 <= k <= n:
        raise InvalidInputError(f"clique size must satisfy 1 <= k <= n, got k={k}, n={n}")
    if r < 0:
        raise InvalidInputError(f"number of planted cliques must be nonnegative, got r={r}")


def gen_planted_cover(n: int, p: float, k: int, r: int, seed: int) -> PlantedCoverInstance:
    """
    Samples G(n, p, k, r): a G(n, p) background, then r cliques of size k, each an independent
    uniform k-subset, made complete in order. r = 1 is the planted clique distribution G(n, p, k)
    and r = 0 is plain G(n, p).
    """
    _check_clique_params(n, k, r)
    background = gen_gnp(n, p, seed, tag="background")
    graph = background.copy()
    cliques = _draw_cliques(n, k, r, seed, "cliques")
    for clique in cliques:
        _plant_clique(graph, np.array(sorted(clique), dtype=np.int64))
    lib.debug(f"planted {r} cliques of size {k} into G({n}, {p}): m={graph.m}")
    return PlantedCoverInstance(
        graph=graph,
        background=background,
        planted_cliques=cliques,
        params=PlantedCoverParams(n, p, k, r),
        seed=seed)


def amplify_instance(g: Graph, p: float, k: int, extra: int, seed: int) -> PlantedCoverInstance:
    """
    Plants `extra` more k-cliques into `g`, continuing where the planted clique distribution left
    off. The input's edges are all labeled background; its own ground truth (if any) is not
    consulted, so the result only records the new cliques.
    """
    _check_clique_params(g.n, k, extra)
    graph = g.copy()
    cliques = _draw_cliques(g.n, k, extra, seed, "amplify")
    for clique in cliques:
        _plant_clique(graph, np.array(sorted(clique), dtype=np.int64))
    return PlantedCoverInstance(
        graph=graph,
        background=g,
        planted_cliques=cliques,
        params=PlantedCoverParams(g.n, p, k, extra),
        seed=seed,
        generator="amplify")


####################################################################################################

def density(g: Graph, cluster) -> float:
    """
    Fraction of the pairs of `cluster` joined by an edge: 2|E(S)| / (|S|(|S|-1)). Clusters with
    fewer than two vertices have density 0.
    """
    vertices = sorted(set(cluster))
    size = len(vertices)
    if size < 2:
        return 0.0
    inside = int(g.count_into(vertices, vertices).sum())  # each edge counted twice
    return inside / (size * (size - 1))


def bidensity(g: Graph, s, t) -> float:
    """
    Fraction of the ordered pairs (u, v) ∈ S × T joined by an edge.
    """
    s = sorted(set(s))
    t = sorted(set(t))
    if not s or not t:
        raise InvalidInputError("bidensity is undefined for an empty vertex set")
    return int(g.count_into(s, t).sum()) / (len(s) * len(t))


####################################################################################################

@dataclass
class DistinguisherResult:
    verdict: str
    """Either "null" or "planted"."""

    statistic: float
    """m − E_null[m]."""

    threshold: float
    """The statistic above which the verdict is "planted" (half the expected surplus)."""


def edge_count_distinguisher(g: Graph, p: float, k: int, r: int) -> DistinguisherResult:
    """
    Tells G(n, p) from G(n, p, k, r) by counting edges: planting r cliques adds
    r(1-p)k(k-1)/2 edges in expectation, so the test answers "planted" iff the edge surplus over
    p·n(n-1)/2 exceeds half of that.
    """
    if not 0.0 < p < 1.0:
        raise InvalidInputError(f"edge probability must lie in (0, 1), got {p}")
    expected_null = p * g.n * (g.n - 1) / 2
    surplus = r * (1 - p) * k * (k - 1) / 2
    statistic = g.m - expected_null
    verdict = "planted" if statistic > surplus / 2 else "null"
    return DistinguisherResult(verdict, statistic, surplus / 2)

####################################################################################################
