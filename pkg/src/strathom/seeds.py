"""Deterministic seed derivation.

A single user-facing seed fans out into independent per-task streams by
hashing the seed together with a task path, so parallel or reordered
tasks reproduce bit-identically.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_seed(seed: int, *path: str) -> int:
    h = hashlib.sha256()
    h.update(str(int(seed)).encode())
    for part in path:
        h.update(b"/")
        h.update(part.encode())
    return int.from_bytes(h.digest()[:8], "big")


def rng_for(seed: int, *path: str) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, *path))
