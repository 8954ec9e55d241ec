"""
This module contains application global state.
"""

import os

####################################################################################################

args = object()
"""Container for parsed program arguments (cf. signalgame.py)"""

debug_mode = os.getenv("DEBUG") is not None
"""
Whether debug mode is enabled, printing extra information (solver statuses, per-seed timings).
"""

truth_files_opened = []  # type: list[str]
"""
Paths of every ground-truth file read during this process (appended by
:py:func:`graph_io.read_truth_file`). Lets tests audit that recovery never peeks at the truth
unless it was explicitly handed a truth file.
"""

####################################################################################################
