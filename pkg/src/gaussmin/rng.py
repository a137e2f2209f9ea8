"""Counter-keyed random streams.

Every randomized routine in the package draws from Philox generators keyed
by (seed, stream index), so results are reproducible and independent of how
work is partitioned across tasks.
"""

from __future__ import annotations

import numpy as np

DEFAULT_SEED = 0xD1CE


def substream(seed: int, stream: int = 0) -> np.random.Generator:
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, stream & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
