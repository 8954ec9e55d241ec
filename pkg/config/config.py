import libsg as lib

from .game import GameConfig
from .graph import GraphConfig
from .logs import LogsConfig
from .paths import PathsConfig
from .recovery import RecoveryConfig
from .validator import ValidatorConfig


class ExperimentConfig(
    PathsConfig,
    GraphConfig,
    GameConfig,
    RecoveryConfig,
    ValidatorConfig,
    LogsConfig,
):

    # ==============================================================================================

    def __init__(self, preset: str | None = None):

        self.preset = preset
        """
        Name of the preset this config started from (None for the defaults). Recorded in the
        experiment metadata.
        """

        self.constants_profile = "desk"
        """
        Which constants the run uses: "reference" when they match the analysis (150, 0.9, 0.8,
        3n/k), "desk" when some were relaxed to fit a desk-scale run. Written in every CSV row.
        """

        super().__init__()

    # ==============================================================================================

    def apply(self, values: dict, source: str):
        """
        Overrides the attributes named in `values` (as read from a config file). Unknown keys are
        reported but otherwise ignored.
        """
        for key, value in values.items():
            if key.startswith("_") or key not in vars(self):
                lib.info(f"Warning: {source} sets unknown option `{key}`, ignoring it.")
                continue
            setattr(self, key, value)

    # ----------------------------------------------------------------------------------------------

    def to_json(self) -> dict:
        """The public attributes of the config, for the experiment metadata."""
        return {key: value for key, value in vars(self).items() if not key.startswith("_")}

    # ==============================================================================================

    def validate(self):
        """
        Check the validity of the configuration. This raises an error if the config is invalid or
        inconsistent.
        """
        if self.constants_profile not in ("reference", "desk"):
            raise ValueError(
                f"constants_profile must be 'reference' or 'desk', got {self.constants_profile}")
        self._validate_graph()
        self._validate_game()
        self._validate_recovery()
        self._validate_validator()

####################################################################################################
