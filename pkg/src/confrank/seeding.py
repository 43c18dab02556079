"""Deterministic seed derivation.

Python's builtin hash() is salted per process, so child seeds are
derived from a cryptographic digest instead; the same parts always
yield the same stream, across processes and platforms.
"""

from __future__ import annotations

import hashlib

import numpy as np


def stable_seed(*parts) -> int:
    text = ":".join(str(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def stable_rng(*parts) -> np.random.Generator:
    return np.random.default_rng(stable_seed(*parts))
