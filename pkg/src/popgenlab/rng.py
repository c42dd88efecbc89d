"""Reproducible random streams.

All stochastic operators draw from numpy's PCG64 bit generator. A run is
identified by one 64-bit seed; independent sub-streams are derived with
``SeedSequence(seed, spawn_key=path)`` where the path encodes position:

* trajectory / session stepping uses one sub-stream per generation index,
  so re-running generation t never depends on how earlier draws were
  consumed (a reloaded session continues bit-identically);
* batch studies use one sub-stream per replicate index (and size index),
  so replicates can be computed in any order or in parallel with
  identical results.
"""

from __future__ import annotations

import secrets

import numpy as np

MAX_SEED = 2**64 - 1


def fresh_seed() -> int:
    """Random 64-bit seed for runs where the caller did not supply one."""
    return secrets.randbits(64)


def substream(seed: int, *path: int) -> np.random.Generator:
    """Generator for the sub-stream at ``path`` under ``seed``.

    The same (seed, path) always yields the same stream, on any platform.
    """
    if not (0 <= seed <= MAX_SEED):
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(i) for i in path))
    return np.random.Generator(np.random.PCG64(ss))
