class ValidatorConfig:
    """
    Configuration options for the statistical validators (`signalgame validate`).
    """

    # ==============================================================================================

    def __init__(self):
        super().__init__()

        self.density_slack = 1.1
        """
        The bidensity validator fails if any sampled cluster pair has bidensity above
        density_slack · p. Must exceed 1 (1.1 by default).
        """

        self.min_cluster_factor = 10.0
        """
        Sampled clusters have at least ⌈min_cluster_factor · log2 n⌉ vertices (and at most twice
        that). Must be positive (10 by default, 110 vertices at n = 2000).
        """

        self.pair_samples = 200
        """Number of random cluster pairs the bidensity validator samples (200 by default)."""

        self.seed_pass_fraction = 0.95
        """
        Fraction of the seeds on which a per-seed property must hold for a validator or an
        experiment to pass (0.95 by default).
        """

        self.significance = 0.01
        """
        Significance level of the amplification two-sample test: it fails when the p-value drops
        below this (0.01 by default).
        """

    # ==============================================================================================

    def _validate_validator(self):
        if self.density_slack <= 1.0:
            raise ValueError(f"density_slack must exceed 1, got {self.density_slack}")
        if self.min_cluster_factor <= 0:
            raise ValueError(f"min_cluster_factor must be positive, got {self.min_cluster_factor}")
        if not isinstance(self.pair_samples, int) or self.pair_samples < 1:
            raise ValueError(f"pair_samples must be a positive integer, got {self.pair_samples}")
        if not 0.0 < self.seed_pass_fraction <= 1.0:
            raise ValueError(
                f"seed_pass_fraction must lie in (0, 1], got {self.seed_pass_fraction}")
        if not 0.0 < self.significance < 1.0:
            raise ValueError(f"significance must lie in (0, 1), got {self.significance}")

    # ==============================================================================================
