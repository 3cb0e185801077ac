"""SplitMix64, vectorised over numpy uint64.

The n-th output of a stream started at state ``s`` is ``mix(s + n*GAMMA)``,
so any block of outputs can be produced without a loop and a stream can be
jumped ahead by adding a multiple of GAMMA to its state.
"""

from __future__ import annotations

import numpy as np

GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
MASK64 = (1 << 64) - 1

# sample i of a run starts 2**40 draws after sample i-1
SAMPLE_STRIDE = 1 << 40


def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & MASK64

    @classmethod
    def for_sample(cls, seed: int, index: int) -> SplitMix64:
        """Stream of sample ``index``: the run's stream jumped ahead by
        ``index * 2**40`` draws."""
        return cls((int(seed) + index * SAMPLE_STRIDE * GAMMA) & MASK64)

    def next_u64(self, count: int) -> np.ndarray:
        steps = np.arange(1, count + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            z = np.uint64(self.state) + steps * np.uint64(GAMMA)
            out = _mix(z)
        self.state = (self.state + count * GAMMA) & MASK64
        return out

    def integers_below(self, k: int, count: int) -> np.ndarray:
        """``count`` uniform draws from range(k): a 64-bit draw is rejected
        when it is >= the largest multiple of k not exceeding 2**64, then
        reduced mod k."""
        limit = (1 << 64) - ((1 << 64) % k)
        out = np.empty(count, dtype=np.int64)
        filled = 0
        while filled < count:
            raw = self.next_u64(count - filled)
            if limit < (1 << 64):
                raw = raw[raw < np.uint64(limit)]
            out[filled:filled + raw.size] = (raw % np.uint64(k)).astype(np.int64)
            filled += raw.size
        return out
