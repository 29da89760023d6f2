"""Deterministic pseudo-random generation for tables, splits, and trials.

Fixture files produced by this package must be reproducible bit for bit
on any platform, and from any language that re-implements the generator,
so the whole stream is pinned down here instead of delegating to host
runtime generators:

* State setup: the 64-bit user seed feeds a ``splitmix64`` stream whose
  first four outputs become the generator state.
* Core generator: ``xoshiro256**``. One step of state ``s[0..3]`` emits
  ``rotl64(s[1] * 5, 7) * 9`` and then updates
  ``t = s[1] << 17; s[2] ^= s[0]; s[3] ^= s[1]; s[1] ^= s[2];
  s[0] ^= s[3]; s[2] ^= t; s[3] = rotl64(s[3], 45)``
  with all arithmetic modulo 2**64.
* Uniform doubles: the top 53 bits scaled by 2**-53 give U[0, 1);
  adding 0.5 before scaling gives the open interval U(0, 1).
* Normal draws: basic Box-Muller, exactly two uniforms per draw,
  ``sqrt(-2 ln u1) * cos(2 pi u2)`` with ``u1`` from the open interval.
* Bounded integers: masked rejection sampling (no modulo bias).

``splitmix64`` advances its own 64-bit state by 0x9E3779B97F4A7C15 and
mixes it with the xor/multiply finalizer (constants 0xBF58476D1CE4E5B9
and 0x94D049BB133111EB, shifts 30/27/31).
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
_SPLITMIX_MULT1 = 0xBF58476D1CE4E5B9
_SPLITMIX_MULT2 = 0x94D049BB133111EB
_TWO_POW_MINUS_53 = 2.0**-53


def _splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step: returns (next state, output)."""
    state = (state + _SPLITMIX_GAMMA) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * _SPLITMIX_MULT1) & _MASK64
    z = ((z ^ (z >> 27)) * _SPLITMIX_MULT2) & _MASK64
    return state, z ^ (z >> 31)


def derive_seeds(seed: int, count: int) -> list[int]:
    """Independent sub-stream seeds (per-trial seeds) from a master seed."""
    state = seed & _MASK64
    seeds = []
    for _ in range(count):
        state, value = _splitmix64(state)
        seeds.append(value)
    return seeds


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class Xoshiro256:
    """xoshiro256** stream seeded through splitmix64."""

    def __init__(self, seed: int):
        state = seed & _MASK64
        words = []
        for _ in range(4):
            state, word = _splitmix64(state)
            words.append(word)
        self._s = words

    def next_uint64(self) -> int:
        s = self._s
        result = (_rotl((s[1] * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s[1] << 17) & _MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def uniform(self) -> float:
        """One double in [0, 1)."""
        return (self.next_uint64() >> 11) * _TWO_POW_MINUS_53

    def open_uniform(self) -> float:
        """One double in the open interval (0, 1)."""
        return ((self.next_uint64() >> 11) + 0.5) * _TWO_POW_MINUS_53

    def normal(self) -> float:
        """One standard normal draw; consumes exactly two uniforms."""
        u1 = self.open_uniform()
        u2 = self.uniform()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def below(self, bound: int) -> int:
        """Unbiased integer in [0, bound) via masked rejection."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        mask = (1 << (bound - 1).bit_length()) - 1 if bound > 1 else 0
        while True:
            value = self.next_uint64() & mask
            if value < bound:
                return value

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle, back to front."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
