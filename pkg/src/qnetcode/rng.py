"""Counter-based random streams for replayable parallel Monte Carlo.

Streams are keyed by (master seed, stream id[, substream...]); the same
key always yields the same Philox stream regardless of worker count or
execution order.
"""

from __future__ import annotations

import numpy as np


def stream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator derived from a master seed and a stream key."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(key))
    return np.random.Generator(np.random.Philox(ss))
