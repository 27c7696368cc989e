"""Deterministic random-number streams.

Every seeded operation in this package draws from a Philox4x64 counter-based
generator keyed by ``(seed, stream)``.  Philox is a fixed, documented
algorithm, so identical seeds reproduce identical results across platforms
and numpy versions; nothing ever touches the host's default RNG state.
"""

from __future__ import annotations

import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF


def substream(seed: int, stream: int = 0) -> np.random.Generator:
    """Independent generator for ``stream`` under master ``seed``.

    Streams with different indices are statistically independent, which lets
    bootstrap replicates, stability repetitions, etc. run in any order (or in
    parallel) without changing results.
    """
    key = np.array([int(seed) & _MASK64, int(stream) & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
