"""Exact primality data: segmented sieve, prime counting, primality windows.

Everything here is exact integer ground truth; no floating point.  The
sieve is odd-only with 2 special-cased, so a segment stores one bit per
odd integer.  Segments are independent given the base primes and may be
sieved concurrently; all merging is done in segment order, so results
never depend on the schedule.
"""

from __future__ import annotations

import math
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from gapline import kernels
from gapline.errors import WindowRangeError

MAX_X = 2**63 - 1

# Packed odd flags for this many integers fit comfortably in L2 cache.
DEFAULT_SEGMENT_SIZE = 1 << 21

MIN_SEGMENT_SIZE = 64

CACHE_ENV = "GAPLINE_CACHE_DIR"
_CACHE_MAGIC = b"GAPLSIEV"
_CACHE_VERSION = 1
_CACHE_HEADER = struct.Struct("<8sIQQ")


def simple_primes(limit: int) -> np.ndarray:
    """All primes <= limit by a plain dense sieve; used for base primes."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def trial_is_prime(n: int) -> bool:
    """Primality of a single integer by trial division; for small edge cases."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for f in range(3, math.isqrt(n) + 1, 2):
        if n % f == 0:
            return False
    return True


@dataclass(frozen=True, eq=False)
class SieveSegment:
    """Primality flags for [lo, hi): one bit per odd integer, 2 special-cased."""

    lo: int
    hi: int
    flags: np.ndarray

    @property
    def odd_start(self) -> int:
        return self.lo | 1

    @property
    def odd_count(self) -> int:
        return (self.hi - self.odd_start + 1) // 2 if self.hi > self.odd_start else 0

    def covers(self, n: int) -> bool:
        return self.lo <= n < self.hi

    def flag(self, n: int) -> bool:
        """Exact primality of n, which must lie in [lo, hi)."""
        if not self.covers(n):
            raise WindowRangeError(f"{n} outside segment [{self.lo}, {self.hi})")
        if n == 2:
            return True
        if n % 2 == 0 or n < 2:
            return False
        i = (n - self.odd_start) // 2
        return bool(self.flags[i >> 3] & (1 << (i & 7)))

    def bools(self) -> np.ndarray:
        """One bool per odd integer in [odd_start, hi)."""
        return kernels.odd_bits_to_bools(self.flags, self.odd_count)

    def primes(self) -> np.ndarray:
        """All primes in [lo, hi), ascending, including 2 when covered."""
        odd = kernels.odd_bits_to_primes(self.lo, self.hi, self.flags)
        if self.covers(2):
            return np.concatenate((np.array([2], dtype=np.int64), odd))
        return odd

    def count(self) -> int:
        return int(kernels.count_odd_bits(self.flags)) + (1 if self.covers(2) else 0)


def _validate_range(lo: int, hi: int, segment_size: int) -> None:
    if lo < 2:
        raise ValueError(f"lo must be >= 2, got {lo}")
    if hi <= lo:
        raise ValueError(f"range inverted: [{lo}, {hi})")
    if hi - 1 > MAX_X:
        raise ValueError(f"range exceeds 2^63 - 1 cap: hi = {hi}")
    if segment_size < MIN_SEGMENT_SIZE:
        raise ValueError(f"segment_size must be >= {MIN_SEGMENT_SIZE}, got {segment_size}")


def _cache_path(lo: int, hi: int) -> Path | None:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    return Path(root) / f"sieve-{lo}-{hi}.seg"


def _cache_load(lo: int, hi: int, nbytes: int) -> np.ndarray | None:
    path = _cache_path(lo, hi)
    if path is None or not path.is_file():
        return None
    raw = path.read_bytes()
    if len(raw) != _CACHE_HEADER.size + nbytes:
        return None
    magic, version, c_lo, c_hi = _CACHE_HEADER.unpack_from(raw)
    if magic != _CACHE_MAGIC or version != _CACHE_VERSION or (c_lo, c_hi) != (lo, hi):
        return None
    return np.frombuffer(raw[_CACHE_HEADER.size :], dtype=np.uint8).copy()


def _cache_store(lo: int, hi: int, bits: np.ndarray) -> None:
    path = _cache_path(lo, hi)
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    header = _CACHE_HEADER.pack(_CACHE_MAGIC, _CACHE_VERSION, lo, hi)
    tmp = path.with_suffix(".tmp")
    tmp.write_bytes(header + bits.tobytes())
    tmp.replace(path)


def _sieve_one(lo: int, hi: int, base: np.ndarray) -> SieveSegment:
    start = lo | 1
    count = (hi - start + 1) // 2 if hi > start else 0
    nbytes = (count + 7) // 8
    bits = _cache_load(lo, hi, nbytes)
    if bits is None:
        bits = kernels.sieve_odd_bits(lo, hi, base)
        _cache_store(lo, hi, bits)
    bits.setflags(write=False)
    return SieveSegment(lo, hi, bits)


def sieve_range(
    lo: int,
    hi: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int | None = None,
) -> list[SieveSegment]:
    """Sieve [lo, hi) into tiling segments, optionally on a thread pool.

    The concatenated flags equal true primality on the range regardless of
    the number of threads: each segment depends only on the shared base
    primes, and the result list is assembled in segment order.
    """
    _validate_range(lo, hi, segment_size)
    base = simple_primes(math.isqrt(hi - 1))
    bounds = [(s, min(s + segment_size, hi)) for s in range(lo, hi, segment_size)]
    if threads is None:
        threads = os.cpu_count() or 1
    if threads <= 1 or len(bounds) == 1:
        return [_sieve_one(s, e, base) for s, e in bounds]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda b: _sieve_one(b[0], b[1], base), bounds))


def prime_count(
    x: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int | None = None,
) -> int:
    """pi(x): the number of primes <= x."""
    if x < 2:
        raise ValueError(f"x must be >= 2, got {x}")
    if x > MAX_X:
        raise ValueError(f"x exceeds 2^63 - 1 cap: {x}")
    return sum(seg.count() for seg in sieve_range(2, x + 1, segment_size, threads))


@dataclass(frozen=True, eq=False)
class PrimeWindow:
    """Primality flags for [anchor - width, anchor], for tuple back-references.

    Queries outside the window raise WindowRangeError rather than
    returning a silent False; integers below 2 inside the window are
    covered and simply not prime.
    """

    anchor: int
    width: int
    flags: np.ndarray

    @classmethod
    def around(cls, anchor: int, width: int) -> "PrimeWindow":
        if width < 0:
            raise ValueError(f"width must be >= 0, got {width}")
        if anchor < 2:
            raise ValueError(f"anchor must be >= 2, got {anchor}")
        lo = anchor - width
        full = np.zeros(width + 1, dtype=bool)
        segs = sieve_range(max(2, lo), anchor + 1)
        for seg in segs:
            start = seg.odd_start
            odd = seg.bools()
            if odd.size:
                full[start - lo : start - lo + 2 * odd.size : 2] = odd
            if seg.covers(2):
                full[2 - lo] = True
        full.setflags(write=False)
        return cls(anchor, width, full)

    def is_prime(self, n: int) -> bool:
        lo = self.anchor - self.width
        if not lo <= n <= self.anchor:
            raise WindowRangeError(
                f"{n} outside window [{lo}, {self.anchor}] (width {self.width})"
            )
        return bool(self.flags[n - lo])


def is_prime(n: int, window: PrimeWindow) -> bool:
    """Exact primality of n via a pre-sieved window."""
    return window.is_prime(n)
