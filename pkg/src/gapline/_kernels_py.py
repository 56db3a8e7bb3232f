"""Pure-Python (numpy) sieve kernels.

Drop-in fallback for the compiled extension ``gapline._kernels``.  Both
backends must produce byte-identical packed flag arrays: primality bits
for the odd integers of a segment, packed little-endian within each byte
(bit ``j`` of byte ``i`` is odd index ``8*i + j``), trailing bits zero.
"""

from __future__ import annotations

import numpy as np


def sieve_odd_bits(lo: int, hi: int, base_primes: np.ndarray) -> np.ndarray:
    """Packed primality bits for the odd integers in [lo|1, hi).

    ``base_primes`` must contain every prime <= sqrt(hi - 1); an entry 2
    is ignored.  Odd index ``i`` corresponds to the integer ``(lo|1) + 2*i``.
    """
    start = lo | 1
    count = (hi - start + 1) // 2 if hi > start else 0
    flags = np.ones(count, dtype=bool)
    if count == 0:
        return np.zeros(0, dtype=np.uint8)
    if start == 1:
        flags[0] = False
    for p in base_primes:
        p = int(p)
        if p == 2:
            continue
        if p * p >= hi:
            break
        first = max(p * p, ((lo + p - 1) // p) * p)
        if first % 2 == 0:
            first += p
        if first >= hi:
            continue
        flags[(first - start) // 2 :: p] = False
    return np.packbits(flags, bitorder="little")


def odd_bits_to_bools(bits: np.ndarray, count: int) -> np.ndarray:
    """Unpack a packed flag array back to one bool per odd integer."""
    if count == 0:
        return np.zeros(0, dtype=bool)
    return np.unpackbits(bits, count=count, bitorder="little").view(bool)


def odd_bits_to_primes(lo: int, hi: int, bits: np.ndarray) -> np.ndarray:
    """Odd primes in [lo|1, hi) recovered from packed flags, as int64."""
    start = lo | 1
    count = (hi - start + 1) // 2 if hi > start else 0
    idx = np.flatnonzero(odd_bits_to_bools(bits, count))
    return (start + 2 * idx).astype(np.int64)


def count_odd_bits(bits: np.ndarray) -> int:
    """Number of set bits (trailing padding is always zero)."""
    return int(np.unpackbits(bits).sum())
