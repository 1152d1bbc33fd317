"""Seeded, splittable random streams for reproducible Monte-Carlo runs."""
from __future__ import annotations

import numpy as np

# Channels keep independent uses of one replicate index apart
PATH_CHANNEL = 0
LIMIT_LAW_CHANNEL = 1
DIRECT_CHANNEL = 2


def make_stream(seed: int, stream_id: int, channel: int = PATH_CHANNEL) -> np.random.Generator:
    """Counter-based Philox generator keyed by (seed, channel, stream_id).

    The key depends only on its arguments, never on how many streams were
    created before, so replicate i draws the same numbers whichever worker
    runs it and in whatever order.
    """
    if stream_id < 0 or channel < 0:
        raise ValueError(f"stream ids must be nonnegative, got ({channel}, {stream_id})")
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(channel), int(stream_id)))
    return np.random.Generator(np.random.Philox(seq))


class StreamFactory:
    """Hands out per-replicate streams for one master seed."""

    def __init__(self, seed: int):
        self._seed = int(seed)

    @property
    def seed(self) -> int:
        return self._seed

    def stream(self, stream_id: int, channel: int = PATH_CHANNEL) -> np.random.Generator:
        return make_stream(self._seed, stream_id, channel)

    def fork(self, offset: int) -> StreamFactory:
        """Child factory with a derived seed for a sub-study."""
        child = np.random.SeedSequence(entropy=self._seed, spawn_key=(int(offset),))
        return StreamFactory(int(child.generate_state(1, dtype=np.uint64)[0]))
