"""Seedable, portable pseudo-random generator used by every stochastic component.

The generator is SplitMix64 (Steele, Lea & Flood's 64-bit mixer driven by a
Weyl sequence).  It is tiny, fast, has a full 2^64 period per stream, and is
trivial to re-implement bit-for-bit in any language, which is what we need to
make noise sequences and experiment sweeps reproducible outside this package.

Streams are split with :meth:`SplitMix64.derive`: each derivation folds a tag
(integers or strings) into the state through one mixing round per tag, so
per-trial generators can be created independently of execution order.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """SplitMix64 stream with helpers for the ranges this package needs."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        return _mix64(self._state)

    def random(self) -> float:
        """Uniform float in [0, 1) with 53 bits of precision."""
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n). Rejection sampling, no modulo bias."""
        if n <= 0:
            raise ValueError("randrange needs a positive bound")
        threshold = _MASK64 - (_MASK64 % n)
        while True:
            u = self.next_u64()
            if u < threshold:
                return u % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive."""
        return lo + self.randrange(hi - lo + 1)

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.random()

    def shuffle(self, seq: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(seq) - 1, 0, -1):
            j = self.randrange(i + 1)
            seq[i], seq[j] = seq[j], seq[i]

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def derive(self, *tags) -> "SplitMix64":
        """Child stream keyed by integer or string tags.

        Independent of how many values the parent has produced; only the
        parent's seed and the tag sequence matter.
        """
        z = self._state
        for tag in tags:
            if isinstance(tag, str):
                for byte in tag.encode("utf8"):
                    z = _mix64((z + _GAMMA + byte) & _MASK64)
            else:
                z = _mix64((z ^ (int(tag) & _MASK64)) + _GAMMA & _MASK64)
        return SplitMix64(z)


DEFAULT_SEED = 0x5EED_FA1D  # fixed so CLI runs without --seed are reproducible
