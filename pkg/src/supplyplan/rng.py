"""Deterministic random streams used by all sampling routines.

The generator is xoshiro256** seeded through SplitMix64, with doubles drawn
by the 53-bit mantissa mapping ``(x >> 11) * 2**-53`` (half-open ``[0, 1)``).
Both algorithms are fixed here, independent of platform and of any library
RNG, so that a seed pins the sampled matrices bit-for-bit.

Reference implementations: https://prng.di.unimi.it/
"""

from __future__ import annotations

import numpy as np

_MASK = 0xFFFFFFFFFFFFFFFF


def _splitmix64(seed: int):
    state = seed & _MASK
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        yield z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK


class Stream:
    """xoshiro256** stream; one instance per sampling call, never shared."""

    def __init__(self, seed: int):
        sm = _splitmix64(int(seed))
        self._s = [next(sm) for _ in range(4)]

    def next_u64(self) -> int:
        s = self._s
        result = (_rotl((s[1] * 5) & _MASK, 7) * 9) & _MASK
        t = (s[1] << 17) & _MASK
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def next_double(self) -> float:
        # 53-bit mantissa mapping, uniform on [0, 1)
        return (self.next_u64() >> 11) * (2.0 ** -53)

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.next_double()

    def uniform_matrix(self, lo, hi, n_rows: int) -> np.ndarray:
        """Row-major matrix of uniforms; ``lo``/``hi`` are per-column vectors."""
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        out = np.empty((n_rows, lo.size))
        for i in range(n_rows):
            for j in range(lo.size):
                out[i, j] = lo[j] + (hi[j] - lo[j]) * self.next_double()
        return out

    def randint(self, lo: int, hi: int) -> int:
        """Integer in [lo, hi] by rejection-free modulo (bias < 2**-50 here)."""
        span = hi - lo + 1
        return lo + self.next_u64() % span
