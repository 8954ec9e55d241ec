class GameConfig:
    """
    Configuration options related to the network security game and scheme evaluation.
    """

    # ==============================================================================================

    def __init__(self):
        super().__init__()

        self.d = 4
        """Defense budget: number of vertices the defender protects (4 by default)."""

        self.rho = 1.0
        """Protection reward: attacker's loss per defended endpoint (1.0 by default)."""

        self.c = 150.0
        """
        The constant c in rho·d = k/c of the clique-partition analysis; also enters the
        closed-form bound coverage − 15/c (150 by default).
        """

        self.bound_target = 0.8
        """
        Attacker utility the clique-partition scheme's lower bound must reach on a seed (0.8 by
        default).
        """

        self.lp_eval_max_n = 1500
        """
        Largest n for which experiments also evaluate the clique-partition scheme exactly (one
        reduced LP per signal). 1500 by default.
        """

        self.check_payoff_range = False
        """
        Whether experiments also check that the explicit payoffs of the security game lie in
        [−2 rho, 1] (False by default).
        """

        self.jobs = 1
        """Number of worker threads for independent seeds and subgames (1 by default)."""

    # ==============================================================================================

    def _validate_game(self):
        if not isinstance(self.d, int) or self.d < 1:
            raise ValueError(f"d must be a positive integer, got {self.d}")
        if self.d > self.n:
            raise ValueError(f"d must not exceed n={self.n}, got {self.d}")
        if self.rho < 0:
            raise ValueError(f"rho must be nonnegative, got {self.rho}")
        if self.c <= 0:
            raise ValueError(f"c must be positive, got {self.c}")
        if not isinstance(self.jobs, int) or self.jobs < 1:
            raise ValueError(f"jobs must be a positive integer, got {self.jobs}")

    # ==============================================================================================
