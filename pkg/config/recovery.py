from recovery import RecoveryParams


class RecoveryConfig:
    """
    Configuration options related to clique recovery.
    """

    # ==============================================================================================

    def __init__(self):
        super().__init__()

        self.run_recovery = True
        """
        Whether experiments run the recovery pipeline on every seed (True by default). Skipped
        anyway when rho·d < 2, where clusters would be empty.
        """

        self.epsilon = 0.1
        """Scheme advantage over 1/2 assumed by the overlap check (0.1 by default)."""

        self.sample_factor = 200.0
        """
        c_R: samples drawn from a cluster have ⌈c_R log2 n⌉ vertices, capped at the cluster size.
        200 by default; desk presets use far less.
        """

        self.trial_budget = 5
        """Independent samples drawn per cluster (5 by default)."""

        self.filter1_fraction = 1.0
        """
        Fraction of the sample a vertex must be adjacent to to survive the first filter (1.0 by
        default, i.e. common neighbors only).
        """

        self.generic_lp = False
        """
        Whether cluster extraction uses a generic LP solver rather than the closed-form top
        selection (False by default). Meant for cross-checking.
        """

        self.recovery_target = 0.5
        """
        Mean fraction of planted cliques an experiment must recover to pass (0.5 by default).
        Set to None to not gate on recovery.
        """

    # ==============================================================================================

    def recovery_params(self) -> RecoveryParams:
        return RecoveryParams(
            d=self.d,
            rho=self.rho,
            epsilon=self.epsilon,
            sample_factor=self.sample_factor,
            trial_budget=self.trial_budget,
            filter1_fraction=self.filter1_fraction,
            generic_lp=self.generic_lp)

    # ----------------------------------------------------------------------------------------------

    def _validate_recovery(self):
        # RecoveryParams checks its own ranges.
        self.recovery_params()
        if self.recovery_target is not None and not 0.0 <= self.recovery_target <= 1.0:
            raise ValueError(f"recovery_target must lie in [0, 1], got {self.recovery_target}")

    # ==============================================================================================
