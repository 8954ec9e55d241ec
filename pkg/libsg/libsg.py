import json
import os
import sys

import state

__all__ = [
    "debug",
    "info",
    "read_json_file",
    "write_json_file",
    "read_config_file",
    "ensure_parent_dir",
    "check_probability_vector",
]


####################################################################################################

def debug(string: str):
    """
    Prints the given string to stderr if debug mode is enabled (`DEBUG` environment variable).
    """
    if state.debug_mode:
        print(f"[DEBUG] {string}", file=sys.stderr)


def info(string: str):
    """
    Prints a status line to stderr. Stdout is reserved for command results (`--format`).
    """
    print(string, file=sys.stderr)


####################################################################################################

def read_json_file(file_path: str) -> dict:
    """
    Reads a JSON file and returns the parsed contents.
    """
    with open(file_path, "r") as file:
        return json.load(file)


####################################################################################################

def write_json_file(file_path: str, data: dict):
    """
    Writes `data` as indented JSON, creating the parent directory if needed.
    """
    ensure_parent_dir(file_path)
    with open(file_path, "w") as file:
        json.dump(data, file, indent=4)
        file.write("\n")


####################################################################################################

def read_config_file(file_path: str) -> dict:
    """
    Reads a configuration file: TOML if the extension is `.toml`, JSON otherwise.
    """
    if not os.path.exists(file_path):
        raise Exception(f"Cannot find config file at {file_path}")
    if file_path.endswith(".toml"):
        import tomli
        with open(file_path, mode="rb") as f:
            return tomli.load(f)
    return read_json_file(file_path)


####################################################################################################

def ensure_parent_dir(file_path: str):
    """
    Creates the directory containing `file_path`, if it doesn't exist yet.
    """
    parent = os.path.dirname(os.path.abspath(file_path))
    os.makedirs(parent, exist_ok=True)


####################################################################################################

def check_probability_vector(vector, name: str, tol: float = 1e-9):
    """
    Raises :py:class:`InvalidInputError` if `vector` is not a finite, nonnegative, one-dimensional
    vector summing to 1 within `tol`. Returns it as a float array.
    """
    import numpy as np
    from .exceptions import InvalidInputError

    v = np.asarray(vector, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise InvalidInputError(f"{name}: must be a nonempty vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InvalidInputError(f"{name}: entries must be finite")
    if v.min() < -tol:
        raise InvalidInputError(f"{name}: entries must be nonnegative (min {v.min():.3g})")
    if abs(v.sum() - 1.0) > tol:
        raise InvalidInputError(f"{name}: entries must sum to 1 (sum {v.sum():.12g})")
    return v

####################################################################################################
