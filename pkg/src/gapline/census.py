"""Exact empirical counts over the primes.

Gap censuses, pair counts pi_2(x, d), k-tuple counts, interval counts
P_r(h, N), and jumping champions.  Counting convention throughout: a
pair or tuple is attributed to its largest element p <= x; offsets are
subtracted (p - d, p - d_j).  All results are exact integers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from gapline.primes import DEFAULT_SEGMENT_SIZE, sieve_range, trial_is_prime


@dataclass(frozen=True, eq=False)
class GapCensus:
    """Exact map gap -> number of consecutive-prime pairs with larger prime <= x."""

    x: int
    prime_total: int
    counts: dict[int, int]

    def count(self, d: int) -> int:
        return self.counts.get(d, 0)

    def champions(self) -> tuple[int, ...]:
        """The full argmax set of the census, ascending."""
        best = max(self.counts.values())
        return tuple(sorted(d for d, c in self.counts.items() if c == best))

    def to_csv(self) -> str:
        lines = ["d,count"]
        lines += [f"{d},{self.counts[d]}" for d in sorted(self.counts)]
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "x": self.x,
            "prime_total": self.prime_total,
            "counts": {str(d): self.counts[d] for d in sorted(self.counts)},
        }

    def write_csv(self, path: str | Path) -> None:
        Path(path).write_text(self.to_csv(), encoding="utf-8")

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.to_json_dict(), indent=2) + "\n", encoding="utf-8"
        )


@dataclass(frozen=True)
class TupleSpec:
    """Offsets {0, inner..., d} of a tuple pattern anchored at its largest element."""

    d: int
    inner: tuple[int, ...] = ()

    def __post_init__(self):
        if self.d < 2 or self.d % 2:
            raise ValueError(f"outer gap d must be a positive even integer, got {self.d}")
        inner = tuple(self.inner)
        object.__setattr__(self, "inner", inner)
        if any(b <= a for a, b in zip(inner, inner[1:])):
            raise ValueError(f"inner offsets must be strictly increasing: {inner}")
        if inner and not (0 < inner[0] and inner[-1] < self.d):
            raise ValueError(f"inner offsets must lie strictly inside (0, {self.d}): {inner}")

    @property
    def offsets(self) -> tuple[int, ...]:
        return (0, *self.inner, self.d)

    @property
    def k(self) -> int:
        return len(self.inner) + 2


def _odd_segments(x, back, segment_size, threads):
    """Yield (cur, ext) bool arrays per segment of [2, x+1].

    ``cur[j]`` is primality of the j-th odd integer of the segment and
    ``ext`` prepends the ``back//2`` odd flags preceding the segment, so
    ``ext[back//2 - s : back//2 - s + len(cur)]`` is primality of p - 2s.
    """
    b2 = back // 2
    # segments must span at least the back-reference so one carry suffices
    seg = max(segment_size, 2 * back + 64)
    carry = np.zeros(b2, dtype=bool)
    for segment in sieve_range(2, x + 1, seg, threads):
        cur = segment.bools()
        ext = np.concatenate((carry, cur))
        yield cur, ext
        carry = ext[len(ext) - b2 :] if b2 else carry


def gap_census(
    x: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int | None = None,
) -> GapCensus:
    """Census of consecutive-prime gaps with the larger prime <= x."""
    if x < 3:
        raise ValueError(f"x must be >= 3, got {x}")
    acc = np.zeros(1, dtype=np.int64)
    total = 0
    carry_prime = None
    for segment in sieve_range(2, x + 1, segment_size, threads):
        ps = segment.primes()
        total += ps.size
        if ps.size == 0:
            continue
        if carry_prime is None:
            gaps = np.diff(ps)
        else:
            gaps = np.diff(np.concatenate(([carry_prime], ps)))
        carry_prime = int(ps[-1])
        if gaps.size:
            binned = np.bincount(gaps)
            if binned.size > acc.size:
                acc = np.concatenate((acc, np.zeros(binned.size - acc.size, np.int64)))
            acc[: binned.size] += binned
    counts = {int(d): int(c) for d, c in enumerate(acc) if c}
    return GapCensus(x=x, prime_total=total, counts=counts)


def pair_count(
    x: int,
    d: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int | None = None,
) -> int:
    """Number of primes p <= x with p - d also prime (not necessarily consecutive)."""
    if x < 2:
        raise ValueError(f"x must be >= 2, got {x}")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if d % 2:
        # p - d even and prime forces p = d + 2
        return 1 if d + 2 <= x and _is_prime_int(d + 2) else 0
    total = 0
    for cur, ext in _odd_segments(x, d, segment_size, threads):
        total += int(np.count_nonzero(cur & ext[: cur.size]))
    return total


def tuple_count(
    x: int,
    spec: TupleSpec,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int | None = None,
) -> int:
    """Number of primes p <= x with p - o prime for every offset o of the spec."""
    if x < 2:
        raise ValueError(f"x must be >= 2, got {x}")
    odd_offsets = [o for o in spec.inner if o % 2]
    if odd_offsets:
        # p - o even and prime forces p = o + 2; two odd offsets are impossible
        if len(odd_offsets) > 1:
            return 0
        p = odd_offsets[0] + 2
        ok = p <= x and all(_is_prime_int(p - o) for o in spec.offsets)
        return 1 if ok else 0
    shifts = [o // 2 for o in spec.offsets if o]
    d2 = spec.d // 2
    total = 0
    for cur, ext in _odd_segments(x, spec.d, segment_size, threads):
        mask = cur.copy()
        for s in shifts:
            mask &= ext[d2 - s : d2 - s + cur.size]
        total += int(np.count_nonzero(mask))
    return total


def interval_census(
    N: int,
    h: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int | None = None,
) -> dict[int, int]:
    """P_r(h, N): for each r, how many n <= N have exactly r primes in (n, n+h]."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if h < 1:
        raise ValueError(f"h must be >= 1, got {h}")
    limit = N + h
    flags = np.zeros(limit + 1, dtype=bool)
    for segment in sieve_range(2, limit + 1, segment_size, threads):
        odd = segment.bools()
        if odd.size:
            start = segment.odd_start
            flags[start : start + 2 * odd.size : 2] = odd
        if segment.covers(2):
            flags[2] = True
    pi = np.cumsum(flags, dtype=np.int64)
    r_vals = pi[1 + h : N + h + 1] - pi[1 : N + 1]
    binned = np.bincount(r_vals)
    return {int(r): int(c) for r, c in enumerate(binned) if c}


def jumping_champions(
    x: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threads: int | None = None,
) -> tuple[int, ...]:
    """Most frequent consecutive-prime gaps up to x; ties reported in full."""
    if x < 5:
        raise ValueError(f"x must be >= 5 so at least two gaps exist, got {x}")
    return gap_census(x, segment_size, threads).champions()
