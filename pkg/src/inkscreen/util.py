"""Small shared helpers: deterministic seed derivation."""

from __future__ import annotations

import hashlib

import numpy as np


def seed_for(master: int, *path) -> int:
    """Derive a stable 63-bit seed from a master seed and a structured path.

    Units of work (repeats, folds, permutations, trees) each get a seed that
    depends only on the master seed and their coordinates, never on execution
    order, so results are identical at any parallelism level.
    """
    key = repr((int(master),) + tuple(path)).encode("utf-8")
    digest = hashlib.sha256(key).digest()
    return int.from_bytes(digest[:8], "little") >> 1


def rng_for(master: int, *path) -> np.random.Generator:
    return np.random.default_rng(seed_for(master, *path))
