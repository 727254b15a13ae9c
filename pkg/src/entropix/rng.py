"""Seeded random streams.

A stream is identified by (seed, stream_id); the same pair always replays the
same draw sequence. Distinct stream ids are derived through SeedSequence
spawn keys, so they share no state.
"""

import numpy as np


class RngStream:
    def __init__(self, seed: int, stream_id: int = 0):
        if seed < 0 or stream_id < 0:
            raise ValueError("seed and stream_id must be nonnegative")
        self.seed = seed
        self.stream_id = stream_id
        ss = np.random.SeedSequence(entropy=seed, spawn_key=(stream_id,))
        self._gen = np.random.Generator(np.random.PCG64(ss))

    def uniform(self) -> float:
        """One draw from U[0, 1)."""
        return float(self._gen.random())

    def uniforms(self, n: int) -> np.ndarray:
        return self._gen.random(n)

    def integer(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        return int(self._gen.integers(0, n))

    def substream(self, stream_id: int) -> "RngStream":
        """Independent stream under the same seed."""
        return RngStream(self.seed, stream_id)

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"
