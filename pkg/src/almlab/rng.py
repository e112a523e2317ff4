"""Counter-based random streams with O(1) access to any index.

Draws are pure functions of (seed, stream id, index): index space is carved
into fixed blocks, each block's uniforms generated by a Philox generator
keyed through SeedSequence(seed, stream, block).  Identical values arise on
any platform and under any access order or thread schedule, which is what
makes parallel trials and lazily sampled oracles reproducible.
"""
from __future__ import annotations

import numpy as np

_BLOCK_BITS = 12
_BLOCK = 1 << _BLOCK_BITS


class UniformStream:
    """Random-access stream of uniforms on [0,1), cached block-wise."""

    def __init__(self, seed: int, stream: int, cache_blocks: int = 64):
        self.seed = int(seed)
        self.stream = int(stream)
        self._cache: dict[int, np.ndarray] = {}
        self._cache_blocks = cache_blocks

    def _block(self, b: int) -> np.ndarray:
        blk = self._cache.get(b)
        if blk is None:
            ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream, b))
            blk = np.random.Generator(np.random.Philox(ss)).random(_BLOCK)
            if len(self._cache) >= self._cache_blocks:
                self._cache.pop(next(iter(self._cache)))
            self._cache[b] = blk
        return blk

    def at(self, index: int) -> float:
        return float(self._block(index >> _BLOCK_BITS)[index & (_BLOCK - 1)])

    def at_many(self, indices: np.ndarray) -> np.ndarray:
        indices = np.asarray(indices, dtype=np.int64)
        out = np.empty(len(indices), dtype=np.float64)
        blocks = indices >> _BLOCK_BITS
        offsets = indices & (_BLOCK - 1)
        for b in np.unique(blocks):
            sel = blocks == b
            out[sel] = self._block(int(b))[offsets[sel]]
        return out


def trial_seed(master_seed: int, trial: int) -> int:
    """Stable per-trial seed derived from the master seed."""
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(0xA17, int(trial)))
    return int(ss.generate_state(1, np.uint64)[0])
