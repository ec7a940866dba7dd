"""Seeded, splittable 64-bit PRNG used for reproducible fuzzing.

This is the splitmix64 generator: a 64-bit counter advanced by a fixed odd
increment, with the output produced by a finalising hash of the counter.
It is deliberately simple so that fuzz runs are byte-for-byte reproducible
from a single integer seed across platforms and Python versions.  Not for
cryptographic use.
"""

from __future__ import annotations

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    """splitmix64 stream.  Deterministic given the seed."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        """Return the next 64-bit output word."""
        self._state = (self._state + _GOLDEN) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Return an integer in [0, n).  Uses reduction modulo n; the bias is
        at most n / 2**64, negligible for the alphabet sizes used here."""
        if n <= 0:
            raise ValueError("bound must be positive")
        return self.next_u64() % n

    def choice(self, seq):
        """Pick one element of a non-empty sequence."""
        return seq[self.below(len(seq))]

    def split(self) -> "SplitMix64":
        """Return an independent child stream.

        The child is seeded from the parent's next output word, so splitting
        then drawing from both streams is reproducible and order-stable.
        """
        return SplitMix64(self.next_u64())
