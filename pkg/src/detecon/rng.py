"""Deterministic pseudo-random machinery used for resampling and subset selection.

Everything here is specified algorithmically so that any reimplementation
(in any language) reproduces identical streams:

* ``splitmix64`` -- Vigna's 64-bit mixer/stream; state advances by the golden
  constant, output is the finalizer of the advanced state.
* ``xoshiro256**`` -- Vigna's generator; each stream is seeded with four
  consecutive splitmix64 outputs drawn from the stream seed.
* bounded sampling -- multiply-high ("Lehmer-style"): ``(u * n) >> 64``; no
  rejection loop, so draw counts are input-independent and reproducible.
* substreams -- the i-th substream seed (0-based) of a root seed is the
  (i+1)-th splitmix64 output of the root, which keeps per-iteration work
  independently seekable and therefore parallelizable without changing
  results.

Scalar and numpy-vectorized paths implement the same algorithm; the test
suite cross-checks them against each other.
"""

from __future__ import annotations

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def splitmix64_mix(z: int) -> int:
    """Output finalizer of splitmix64 applied to an already-advanced state."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def splitmix64_at(seed: int, index: int) -> int:
    """The ``index``-th (0-based) output of the splitmix64 stream seeded with ``seed``."""
    return splitmix64_mix((seed + (index + 1) * GOLDEN) & MASK64)


def fnv1a64(data: bytes) -> int:
    """FNV-1a 64-bit hash; canonical id hash for string identifiers."""
    h = _FNV_OFFSET
    for b in data:
        h = ((h ^ b) * _FNV_PRIME) & MASK64
    return h


def id_hash(image_id: int | str) -> int:
    """64-bit hash of an image id: integers pass through mod 2^64, strings FNV-1a."""
    if isinstance(image_id, bool):
        raise TypeError("image id must be int or str")
    if isinstance(image_id, int):
        return image_id & MASK64
    return fnv1a64(str(image_id).encode("utf-8"))


def selection_key(seed: int, image_id: int | str) -> int:
    """Sort key used for subset selection: first splitmix64 output of (seed XOR id-hash)."""
    return splitmix64_at((seed & MASK64) ^ id_hash(image_id), 0)


class Xoshiro256StarStar:
    """Scalar xoshiro256** stream, seeded from four splitmix64 outputs of ``seed``."""

    def __init__(self, seed: int):
        self.s = [splitmix64_at(seed, i) for i in range(4)]

    @staticmethod
    def _rotl(x: int, k: int) -> int:
        return ((x << k) | (x >> (64 - k))) & MASK64

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s
        result = (self._rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = self._rotl(s3, 45)
        self.s = [s0, s1, s2, s3]
        return result

    def next_below(self, n: int) -> int:
        """Multiply-high bounded draw in [0, n)."""
        if n <= 0:
            raise ValueError("bound must be positive")
        return (self.next_u64() * n) >> 64


# ---------------------------------------------------------------------------
# Vectorized path: one xoshiro256** stream per array lane.
# ---------------------------------------------------------------------------

_U64 = np.uint64


def _vec_mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _U64(30))) * _U64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> _U64(27))) * _U64(0x94D049BB133111EB)
    return z ^ (z >> _U64(31))


def substream_seeds(seed: int, count: int, offset: int = 0) -> np.ndarray:
    """Substream seeds ``offset .. offset+count-1`` of the root seed, as uint64."""
    idx = np.arange(offset + 1, offset + count + 1, dtype=np.uint64)
    return _vec_mix(_U64(seed & MASK64) + idx * _U64(GOLDEN))


class VecXoshiro:
    """Array of independent xoshiro256** streams advanced in lockstep.

    Lane ``i`` produces exactly the stream of ``Xoshiro256StarStar(seeds[i])``.
    """

    def __init__(self, seeds: np.ndarray):
        seeds = seeds.astype(np.uint64, copy=False)
        self.s0 = _vec_mix(seeds + _U64(1 * GOLDEN & MASK64))
        self.s1 = _vec_mix(seeds + _U64(2 * GOLDEN & MASK64))
        self.s2 = _vec_mix(seeds + _U64(3 * GOLDEN & MASK64))
        self.s3 = _vec_mix(seeds + _U64(4 * GOLDEN & MASK64))

    def next_u64(self) -> np.ndarray:
        s1 = self.s1
        x = s1 * _U64(5)
        result = (np.left_shift(x, _U64(7)) | np.right_shift(x, _U64(57))) * _U64(9)
        t = np.left_shift(s1, _U64(17))
        self.s2 = self.s2 ^ self.s0
        self.s3 = self.s3 ^ s1
        self.s1 = s1 ^ self.s2
        self.s0 = self.s0 ^ self.s3
        self.s2 = self.s2 ^ t
        self.s3 = np.left_shift(self.s3, _U64(45)) | np.right_shift(self.s3, _U64(19))
        return result

    def next_below(self, n: int) -> np.ndarray:
        """Vectorized multiply-high bounded draw; requires n < 2^32."""
        if not 0 < n < (1 << 32):
            raise ValueError("bound must be in [1, 2^32)")
        u = self.next_u64()
        nb = _U64(n)
        lo = (u & _U64(0xFFFFFFFF)) * nb
        hi = np.right_shift(u, _U64(32)) * nb
        return (np.right_shift(lo, _U64(32)) + hi) >> _U64(32)
