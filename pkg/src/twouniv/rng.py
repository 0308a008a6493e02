"""Seeding helpers.

Every stochastic routine takes either an integer seed or a
``numpy.random.Generator``.  Generators are always PCG64, seeded through
``numpy.random.SeedSequence``; both are specified bit-for-bit by numpy and
give identical streams on every platform.
"""

from __future__ import annotations

import numpy as np


def make_rng(seed: int | np.random.Generator | None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def derive_seed(base_seed: int, *indices: int) -> int:
    """Deterministic child seed for ``(base_seed, i, j, ...)``.

    Distinct index tuples give independent streams (SeedSequence spawn keys).
    """
    ss = np.random.SeedSequence(int(base_seed), spawn_key=tuple(int(i) for i in indices))
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return (int(hi) << 32) | int(lo)


def child_rng(rng: np.random.Generator) -> np.random.Generator:
    """Fresh generator seeded from ``rng``'s stream."""
    return make_rng(int(rng.integers(0, 2**63 - 1)))
