"""Seed handling: counter-based derivation of independent substreams.

A master seed (int or SeedSequence) is split per observation / replication by
appending the counter to the spawn key, so substream i depends only on
(master, i).  This makes generation order-independent and streamable: drawing
observations [0, n1) and [n1, n1+n2) in two runs equals one run of n1+n2.
"""

import numpy as np

SeedLike = "int | np.random.SeedSequence | np.random.Generator"


def as_seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, (int, np.integer)):
        return np.random.SeedSequence(int(seed))
    raise TypeError(f"expected an integer or SeedSequence, got {type(seed).__name__}")


def as_generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(as_seed_sequence(seed))


def substream(seed, *counters: int) -> np.random.SeedSequence:
    """The substream of `seed` at the given counter path."""
    master = as_seed_sequence(seed)
    entropy = master.entropy if master.entropy is not None else 0
    return np.random.SeedSequence(
        entropy=entropy,
        spawn_key=tuple(master.spawn_key) + tuple(int(c) for c in counters),
    )
