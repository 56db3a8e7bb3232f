# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled sieve kernels.

Mirrors gapline._kernels_py exactly: packed little-endian primality bits
over the odd integers of a segment, trailing bits zero.  The hot loops
release the GIL so segments can be sieved on real threads.
"""

import numpy as np

cimport numpy as cnp
from libc.stdint cimport int64_t, uint8_t, uint64_t

cnp.import_array()

cdef int[256] _POPCNT

cdef void _init_popcnt() noexcept:
    cdef int i, v, c
    for i in range(256):
        v = i
        c = 0
        while v:
            c += v & 1
            v >>= 1
        _POPCNT[i] = c

_init_popcnt()


def sieve_odd_bits(lo, hi, base_primes):
    """Packed primality bits for the odd integers in [lo|1, hi)."""
    cdef uint64_t c_lo = lo
    cdef uint64_t c_hi = hi
    cdef uint64_t start = c_lo | 1
    cdef uint64_t count = 0
    if c_hi > start:
        count = (c_hi - start + 1) // 2
    out = np.empty((count + 7) // 8, dtype=np.uint8)
    cdef uint8_t[::1] buf = out
    cdef int64_t[::1] bp = np.ascontiguousarray(base_primes, dtype=np.int64)
    cdef uint64_t nbytes = buf.shape[0]
    cdef Py_ssize_t np_count = bp.shape[0]
    cdef uint64_t p, first, i, step
    cdef Py_ssize_t j
    if count == 0:
        return out
    with nogil:
        for i in range(nbytes):
            buf[i] = 0xFF
        if start == 1:
            buf[0] &= 0xFE
        for j in range(np_count):
            p = <uint64_t> bp[j]
            if p == 2:
                continue
            if p * p >= c_hi:
                break
            first = ((c_lo + p - 1) // p) * p
            if p * p > first:
                first = p * p
            if first % 2 == 0:
                first += p
            if first >= c_hi:
                continue
            i = (first - start) // 2
            step = p
            while i < count:
                buf[i >> 3] &= ~(<uint8_t> 1 << (i & 7))
                i += step
        # zero the padding bits so the bytes match numpy.packbits output
        if count & 7:
            buf[nbytes - 1] &= <uint8_t> ((1 << (count & 7)) - 1)
    return out


def odd_bits_to_bools(bits, count):
    """Unpack a packed flag array back to one bool per odd integer."""
    cdef uint64_t n = count
    if n == 0:
        return np.zeros(0, dtype=bool)
    return np.unpackbits(bits, count=count, bitorder="little").view(bool)


def odd_bits_to_primes(lo, hi, bits):
    """Odd primes in [lo|1, hi) recovered from packed flags, as int64."""
    cdef uint64_t c_lo = lo
    cdef uint64_t c_hi = hi
    cdef uint64_t start = c_lo | 1
    cdef uint64_t count = 0
    if c_hi > start:
        count = (c_hi - start + 1) // 2
    cdef const uint8_t[::1] buf = bits
    cdef uint64_t total = 0
    cdef uint64_t i, nbytes
    nbytes = buf.shape[0]
    with nogil:
        for i in range(nbytes):
            total += _POPCNT[buf[i]]
    out = np.empty(total, dtype=np.int64)
    cdef int64_t[::1] dst = out
    cdef uint64_t pos = 0
    cdef uint8_t byte
    cdef int b
    with nogil:
        for i in range(nbytes):
            byte = buf[i]
            b = 0
            while byte:
                if byte & 1:
                    dst[pos] = <int64_t> (start + 2 * (8 * i + b))
                    pos += 1
                byte >>= 1
                b += 1
    return out


def count_odd_bits(bits):
    """Number of set bits (trailing padding is always zero)."""
    cdef const uint8_t[::1] buf = bits
    cdef uint64_t total = 0
    cdef uint64_t i, nbytes
    nbytes = buf.shape[0]
    with nogil:
        for i in range(nbytes):
            total += _POPCNT[buf[i]]
    return total
