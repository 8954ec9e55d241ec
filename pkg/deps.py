"""
This module checks the presence of the prerequisites of signalgame.
"""

import importlib.util
import sys

import libsg as lib

REQUIRED_MODULES = {
    "numpy": "numpy",
    "scipy": "scipy",
}
"""Importable module name -> package to install, for the numeric stack."""


####################################################################################################

def check_prerequisites():
    """
    Checks the python version and that the numeric stack can be imported, raising with install
    instructions otherwise.
    """
    check_python_version()
    missing = [pkg for module, pkg in REQUIRED_MODULES.items()
               if importlib.util.find_spec(module) is None]
    if missing:
        raise lib.SignalGameError(
            f"Missing python packages: {', '.join(missing)}. "
            "Install them with `pip install -r requirements.txt` (see README.md).")


####################################################################################################

def check_python_version():
    if sys.version_info < (3, 10):
        raise lib.SignalGameError(
            f"Python 3.10 or greater is required, found {sys.version.split()[0]}")


####################################################################################################

def has_tomli() -> bool:
    """Whether TOML config files can be read."""
    return importlib.util.find_spec("tomli") is not None

####################################################################################################
