import os


class PathsConfig:
    """
    Configuration options related to filesystem paths.
    """

    # ==============================================================================================

    def __init__(self):
        super().__init__()

        self.out_dir = os.path.abspath("results")
        """
        Directory under which every command writes its outputs: generated graphs, schemes,
        reports, experiment CSV files and logs. Set with `--out`. `./results` by default.
        """

        self.results_filename = "results.csv"
        """
        Filename (not path!) of the per-seed experiment table.
        """

        self.summary_filename = "summary.json"
        """
        Filename (not path!) of the experiment summary.
        """

        self.metadata_filename = "metadata.json"
        """
        Filename (not path!) of the experiment metadata (timestamps, runtimes, effective config),
        everything that changes from one run to the next.
        """

    # ==============================================================================================

    @property
    def graphs_dir(self):
        """Directory holding generated graphs and their truth files."""
        return os.path.join(self.out_dir, "graphs")

    @property
    def logs_dir(self):
        return os.path.join(self.out_dir, "logs")

    @property
    def results_file(self):
        return os.path.join(self.out_dir, self.results_filename)

    @property
    def summary_file(self):
        return os.path.join(self.out_dir, self.summary_filename)

    @property
    def metadata_file(self):
        return os.path.join(self.out_dir, self.metadata_filename)

    @property
    def trace_log_file(self):
        """Where the CLI writes the traceback of an error that aborted a command."""
        return os.path.join(self.logs_dir, "trace.log")

    # ==============================================================================================
