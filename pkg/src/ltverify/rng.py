"""Deterministic seeding.

SplitMix64 is used as the seed-stream generator: every randomized sweep
derives its per-trial seeds from a SplitMix64 stream, and each trial then
samples with a numpy ``Generator`` seeded from that value. Both layers are
bit-for-bit reproducible across platforms for a fixed seed.
"""
import numpy as np

_MASK = (1 << 64) - 1


class SplitMix64:
    """The SplitMix64 generator (Steele, Lea, Flood 2014)."""

    def __init__(self, seed: int):
        self.state = int(seed) & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0 ** -53


def trial_generators(seed: int, count: int):
    """Yield ``count`` independent numpy generators derived from ``seed``."""
    sm = SplitMix64(seed)
    for _ in range(count):
        yield np.random.default_rng(sm.next_u64())
