"""Seeded sampling through a fixed 64-bit linear congruential generator.

state' = (6364136223846793005 * state + 1442695040888963407) mod 2^64
(Knuth's MMIX constants).  Outputs use the high 32 bits of the new state.
The seed is mixed once so that seeds 0, 1, 2, ... give unrelated streams.
"""
from __future__ import annotations

MULTIPLIER = 6364136223846793005
INCREMENT = 1442695040888963407
MASK = (1 << 64) - 1


class Lcg64:
    def __init__(self, seed: int = 0):
        self.state = (seed * 0x9E3779B97F4A7C15 + INCREMENT) & MASK

    def next_u32(self) -> int:
        self.state = (MULTIPLIER * self.state + INCREMENT) & MASK
        return self.state >> 32

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 32) - (1 << 32) % n
        while True:
            r = self.next_u32()
            if r < limit:
                return r % n

    def randint(self, lo: int, hi: int) -> int:
        """Inclusive range."""
        return lo + self.below(hi - lo + 1)

    def choice(self, seq):
        return seq[self.below(len(seq))]
