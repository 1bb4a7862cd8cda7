"""Deterministic random-number streams for reproducible parallel Monte Carlo."""

from __future__ import annotations

import numpy as np


def stream(seed: int, *key: int) -> np.random.Generator:
    """Counter-based generator for the sub-stream identified by (seed, *key).

    Philox is keyed through a SeedSequence spawn key, so distinct key tuples
    give statistically independent streams and the same tuple always
    reproduces the same draws, regardless of how many other streams exist
    or in which order they are consumed.
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))
