"""Stable integer seeds from arbitrary (nested) seed material."""

from __future__ import annotations

import hashlib


def derive_seed(*parts) -> int:
    digest = hashlib.sha256(repr(parts).encode()).digest()
    return int.from_bytes(digest[:8], "little")


def as_seed(seed):
    """Pass ints and ``None`` through; hash anything else (tuples, strings) with sha256.

    ``random.Random`` would otherwise hash tuples with Python's per-process
    string hashing, which is not reproducible across runs.
    """
    if seed is None or (isinstance(seed, int) and not isinstance(seed, bool)):
        return seed
    return derive_seed(seed)
