"""Deterministic random number generation.

All randomness in the package flows through :class:`Rng`, a SplitMix64
generator.  The algorithm is fixed here rather than borrowed from
``random.Random`` so that generated datasets are byte-stable across Python
versions and platforms, and so that independent per-problem streams can be
derived cheaply from (seed, index) pairs.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & MASK64
    return z ^ (z >> 31)


def stream_seed(seed: int, index: int) -> int:
    """Derive the seed of the per-item stream ``index`` from a run seed."""
    return _mix((seed ^ _mix(index * _GOLDEN & MASK64)) & MASK64)


class Rng:
    """SplitMix64 stream with the handful of draw helpers the package needs."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & MASK64
        return _mix(self._state)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in the inclusive range [lo, hi]."""
        if hi < lo:
            raise ValueError("empty range")
        span = hi - lo + 1
        # rejection sampling to avoid modulo bias
        limit = (MASK64 + 1) - ((MASK64 + 1) % span)
        while True:
            u = self.next_u64()
            if u < limit:
                return lo + (u % span)

    def choice(self, seq):
        if not seq:
            raise ValueError("empty sequence")
        return seq[self.randint(0, len(seq) - 1)]

    def weighted_choice(self, items, weights):
        """Pick items[i] with probability weights[i] / sum(weights)."""
        total = 0.0
        for w in weights:
            total += w
        x = self.random() * total
        acc = 0.0
        for item, w in zip(items, weights):
            acc += w
            if x < acc:
                return item
        return items[-1]

    def shuffle(self, seq) -> None:
        for i in range(len(seq) - 1, 0, -1):
            j = self.randint(0, i)
            seq[i], seq[j] = seq[j], seq[i]

    def sample(self, seq, k: int) -> list:
        """k distinct elements, order randomized; k must not exceed len(seq)."""
        if k > len(seq):
            raise ValueError("sample larger than population")
        pool = list(seq)
        out = []
        for _ in range(k):
            out.append(pool.pop(self.randint(0, len(pool) - 1)))
        return out

    def spawn(self, index: int) -> "Rng":
        """Independent child stream; deterministic in (current seed, index)."""
        return Rng(stream_seed(self._state, index))
