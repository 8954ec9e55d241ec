class GraphConfig:
    """
    Configuration options related to the random instances: G(n, p, k, r) parameters and seeds.
    """

    # ==============================================================================================

    def __init__(self):
        super().__init__()

        self.n = 200
        """Number of vertices (200 by default)."""

        self.p = 0.5
        """Edge probability of the G(n, p) background (0.5 by default)."""

        self.k = 20
        """Size of every planted clique (20 by default)."""

        self.r = None  # type: int | None
        """
        Number of planted cliques. When left unset, it is derived as round(3n/k), the count for
        which the cliques cover about a 1 − 1/e³ ≈ 0.95 fraction of the vertices.
        """

        self.seeds = [0, 1]  # type: list[int]
        """
        Seeds of the instances an experiment or validator runs over ([0, 1] by default). Set with
        `--seed` to run a single seed, or as a TOML list.
        """

        self.coverage_target = 0.9
        """
        Fraction of the vertices the planted cliques must cover for an instance to count as
        well-covered (0.9 by default).
        """

    # ==============================================================================================

    @property
    def num_cliques(self) -> int:
        return self.r if self.r is not None else round(3 * self.n / self.k)

    # ----------------------------------------------------------------------------------------------

    def _validate_graph(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n}")
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"p must lie in (0, 1), got {self.p}")
        if not isinstance(self.k, int) or not 2 <= self.k <= self.n:
            raise ValueError(f"k must be an integer in [2, n], got {self.k}")
        if self.num_cliques < 0:
            raise ValueError(f"r must be nonnegative, got {self.r}")
        if not self.seeds:
            raise ValueError("the seed list must not be empty")
        if any(not isinstance(s, int) or s < 0 for s in self.seeds):
            raise ValueError(f"seeds must be nonnegative integers, got {self.seeds}")
        if not 0.0 < self.coverage_target <= 1.0:
            raise ValueError(f"coverage_target must lie in (0, 1], got {self.coverage_target}")

    # ==============================================================================================
