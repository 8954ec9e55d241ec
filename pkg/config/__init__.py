from .config import ExperimentConfig
from .presets import (PRESETS, use_lemma3_preset, use_recovery_desk_preset, use_smoke_preset,
                      use_theorem1_preset, use_theorem2_shape_preset)

####################################################################################################
# NOTE
#
# The default config is a tiny desk config, suitable for trying commands out but not for
# reproducing anything.
#
# The presets (`--preset <name>`) switch to one of the regimes we run experiments in:
# - `lemma3`: the clique-partition bound with the analysis' own constants (n = 25000)
# - `theorem1`: d = 1, rho = k/150
# - `theorem2-shape`: d = k/150, rho = 1, checking the payoff range only
# - `recovery-desk`: recovery at n = 3000 with relaxed sampling constants
# - `smoke`: every stage in seconds
#
# A config file (`--config`, TOML or JSON) then overrides individual attributes, and command
# line flags override both.
#
####################################################################################################

__all__ = [
    "ExperimentConfig",
    "PRESETS",
    "use_lemma3_preset",
    "use_theorem1_preset",
    "use_theorem2_shape_preset",
    "use_recovery_desk_preset",
    "use_smoke_preset",
]
