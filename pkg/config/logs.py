import os


# noinspection PyUnresolvedReferences
class LogsConfig:
    """
    Configuration options related to log files.
    """

    # ==============================================================================================

    def __init__(self):
        super().__init__()

        self.tee_console = True
        """
        Whether long-running commands (`experiment`, `validate`) mirror their console output to
        a log file under :py:attr:`logs_dir` (True by default).
        """

        self.log_filenames = {
            "experiment": "experiment.log",
            "validate": "validate.log",
        }  # type: dict[str, str]
        """
        Filename (not path!) of the console log of each teed command.

        Can be overriden in TOML, at the BOTTOM of the file:

        ```
        [log_filenames]
        experiment = "lemma3.log"
        ```
        """

    # ==============================================================================================

    def command_log_file(self, command: str) -> str:
        """
        Path of the console log for `command`, `<logs_dir>/<command>.log` if not configured.
        """
        return os.path.join(self.logs_dir, self.log_filenames.get(command, f"{command}.log"))

    # ==============================================================================================

    # See also:
    # :py:attr:`logs_dir` in :py:class:`config.paths.PathsConfig`
    # :py:attr:`trace_log_file` in :py:class:`config.paths.PathsConfig`

    # ==============================================================================================
