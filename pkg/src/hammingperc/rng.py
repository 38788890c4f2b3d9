"""Counter-based random streams keyed by (master_seed, stream).

Philox gives independent, platform-stable streams for any pair of 64-bit
words, so replica r of a run simply uses stream r of the master seed and
results do not depend on scheduling order.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def stream_rng(master_seed: int, stream: int = 0) -> np.random.Generator:
    """Generator for one (master_seed, stream) pair."""
    key = np.array([master_seed & _MASK64, stream & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
