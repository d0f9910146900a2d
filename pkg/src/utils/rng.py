"""
Deterministic random streams (SplitMix64 seeded from SHA-256)
"""
import hashlib
from typing import Sequence, TypeVar

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15

T = TypeVar("T")


class SplitMix64:
    """64-bit SplitMix generator; identical output on every platform"""

    def __init__(self, state: int):
        self.state = state & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def draw_range(self, low: int, high: int) -> int:
        """Uniform integer in [low, high], both ends inclusive"""
        if high < low:
            raise ValueError(f"empty range [{low}, {high}]")
        span = high - low + 1
        # Rejection sampling keeps the draw unbiased
        limit = (1 << 64) - ((1 << 64) % span)
        while True:
            value = self.next_u64()
            if value < limit:
                return low + value % span

    def random(self) -> float:
        """Float in [0, 1) with 53 bits of precision"""
        return (self.next_u64() >> 11) / float(1 << 53)

    def chance(self, probability: float) -> bool:
        return self.random() < probability

    def choice(self, items: Sequence[T]) -> T:
        if not items:
            raise ValueError("choice from empty sequence")
        return items[self.draw_range(0, len(items) - 1)]


def rng_stream(seed: int, label: str) -> SplitMix64:
    """
    Independent deterministic substream for (seed, label)

    The initial state is the first 8 bytes of SHA-256(seed as 8-byte big-endian || label).
    """
    digest = hashlib.sha256((seed & MASK64).to_bytes(8, "big") + label.encode("utf-8")).digest()
    return SplitMix64(int.from_bytes(digest[:8], "big"))
