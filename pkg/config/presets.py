"""
Functions in this file alter an ExperimentConfig object (that must be default-initialized!) so
that it matches one of the parameter regimes we run experiments in.
"""

from .config import ExperimentConfig


####################################################################################################

def use_lemma3_preset(config: ExperimentConfig):
    """
    The regime of the clique-partition bound with the analysis' own constants: n = 25000,
    p = 1/2, k = 150, r = 3n/k = 500 and rho·d = k/150 = 1. The bound must reach 0.8 on 95% of
    20 seeds.

    Generation dominates the runtime (minutes per seed, ~80 MB per graph). Clusters would be
    empty at rho·d = 1, so recovery is off.
    """
    config.n = 25000
    config.p = 0.5
    config.k = 150
    config.r = 500
    config.d = 1
    config.rho = 1.0
    config.c = 150.0
    config.seeds = list(range(20))
    config.bound_target = 0.8
    config.coverage_target = 0.9
    config.run_recovery = False
    config.recovery_target = None
    config.constants_profile = "reference"


####################################################################################################

def use_theorem1_preset(config: ExperimentConfig):
    """
    One defended vertex and a large protection reward: d = 1, rho = k/150. At k = 300 this is
    rho = 2.
    """
    use_lemma3_preset(config)
    config.k = 300
    config.r = 250
    config.d = 1
    config.rho = config.k / 150


####################################################################################################

def use_theorem2_shape_preset(config: ExperimentConfig):
    """
    Many defended vertices at unit reward: d = floor(k/150), rho = 1 (d = 1 at k = 150). Checks
    that the explicit payoffs stay in [−2 rho, 1] on a small graph rather than reproducing the
    hardness itself.
    """
    config.n = 2000
    config.p = 0.5
    config.k = 150
    config.r = 40
    config.d = config.k // 150
    config.rho = 1.0
    config.seeds = list(range(5))
    config.check_payoff_range = True
    config.run_recovery = False
    config.recovery_target = None
    config.bound_target = 0.0
    config.coverage_target = 0.9
    config.constants_profile = "desk"


####################################################################################################

def use_recovery_desk_preset(config: ExperimentConfig):
    """
    Recovery at desk scale: n = 3000, k = 60, r = 150, rho·d = 20 (clusters of 10 vertices),
    20 seeds. The clique-partition scheme must recover half the planted cliques on average.
    Samples are whole clusters (c_R = 1), so the 200 log n sample constant is relaxed.
    """
    config.n = 3000
    config.p = 0.5
    config.k = 60
    config.r = 150
    config.d = 20
    config.rho = 1.0
    config.seeds = list(range(20))
    config.sample_factor = 1.0
    config.trial_budget = 5
    config.run_recovery = True
    config.recovery_target = 0.5
    # 60/150 < 1, the closed-form bound doesn't apply at this k
    config.bound_target = 0.0
    config.constants_profile = "desk"


####################################################################################################

def use_smoke_preset(config: ExperimentConfig):
    """
    A tiny configuration running every stage in seconds, for checking an installation.
    """
    config.n = 200
    config.p = 0.5
    config.k = 20
    config.r = 30
    config.d = 4
    config.rho = 1.0
    config.seeds = [0, 1]
    config.sample_factor = 1.0
    config.trial_budget = 3
    config.run_recovery = True
    config.recovery_target = None
    config.bound_target = 0.0
    config.coverage_target = 0.9
    config.constants_profile = "desk"


####################################################################################################

PRESETS = {
    "lemma3": use_lemma3_preset,
    "theorem1": use_theorem1_preset,
    "theorem2-shape": use_theorem2_shape_preset,
    "recovery-desk": use_recovery_desk_preset,
    "smoke": use_smoke_preset,
}
"""Preset mutators by the name accepted by `--preset`."""

####################################################################################################
