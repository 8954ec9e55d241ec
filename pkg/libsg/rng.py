"""
Deterministic random streams.

Every random decision in the project draws from a numpy Philox generator whose key is derived
from a parent seed, a purpose tag and an index:

    child_seed = first 8 bytes (little-endian) of blake2b(parent_seed | tag | index)

so that e.g. the background graph and the planted cliques of one instance come from independent
streams, and re-running any step with the same seed reproduces it bit for bit.
"""

import hashlib

import numpy as np

__all__ = ["MAX_SEED", "child_seed", "make_rng", "partial_shuffle"]

MAX_SEED = 2**64 - 1


####################################################################################################

def child_seed(parent_seed: int, tag: str, index: int = 0) -> int:
    """
    Derives a 64-bit seed for the stream identified by (`tag`, `index`) under `parent_seed`.
    """
    if not 0 <= parent_seed <= MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {parent_seed}")
    h = hashlib.blake2b(digest_size=8)
    h.update(int(parent_seed).to_bytes(8, "little"))
    h.update(tag.encode("utf-8"))
    h.update(int(index).to_bytes(8, "little", signed=True))
    return int.from_bytes(h.digest(), "little")


####################################################################################################

def make_rng(parent_seed: int, tag: str, index: int = 0) -> np.random.Generator:
    """
    Returns a Philox-backed generator for the stream (`tag`, `index`) under `parent_seed`.
    """
    return np.random.Generator(np.random.Philox(key=child_seed(parent_seed, tag, index)))


####################################################################################################

def partial_shuffle(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    """
    Returns the first `k` entries of a Fisher-Yates shuffle of `range(n)`, i.e. a uniformly random
    ordered k-subset. Only the first `k` swaps are performed.
    """
    if not 0 <= k <= n:
        raise ValueError(f"cannot draw {k} distinct items out of {n}")
    perm = np.arange(n, dtype=np.int64)
    for i in range(k):
        j = i + int(rng.integers(n - i))
        perm[i], perm[j] = perm[j], perm[i]
    return perm[:k].copy()

####################################################################################################
