"""Singular-series arithmetic for prime tuple patterns.

The singular series of an offset set H with |H| = k is the Euler product
over all primes of (1 - 1/p)^(-k) * (1 - nu_H(p)/p), where nu_H(p) is
the number of residue classes mod p occupied by H.  For p beyond the
diameter of H every class is distinct, so nu_H(p) = k and the remaining
product is a k-dependent constant: we evaluate it analytically through
prime zeta values instead of truncating, which turns the infinite
product into a certified finite computation.

Writing f_k(p) = (1 - 1/p)^(-k) (1 - k/p), the tail satisfies

    log f_k(p) = -sum_{j>=2} (k^j - k)/j * p^(-j),

so summing over p > P exchanges into prime zeta tails, each computed as
primezeta(j) minus a finite sum.  The j-series is truncated at J = 64;
the neglected remainder is bounded by a geometric series and reported as
``tail_bound`` together with the evaluation allowance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from pathlib import Path

import mpmath
import numpy as np

from gapline.errors import CapExceeded, ToleranceUnachievable
from gapline.primes import simple_primes, trial_is_prime

DEFAULT_REL_TOL = 1e-9
TRUNCATION_CAP = 10**7
DEFAULT_ENUMERATION_CAP = 1_000_000

# smallest truncation prime used for the exact part of any product
_MIN_TRUNCATION = 53

_TAIL_SERIES_ORDER = 64

# per-term precision allowance for the prime zeta evaluations (30 dps)
_ZETA_EPS = 1e-24


@dataclass(frozen=True)
class OffsetTuple:
    """Normalized set of k distinct offsets, smallest fixed at 0."""

    offsets: tuple[int, ...]

    def __post_init__(self):
        offs = tuple(self.offsets)
        object.__setattr__(self, "offsets", offs)
        if not offs:
            raise ValueError("offset tuple must be non-empty")
        if offs[0] != 0:
            raise ValueError(f"offsets must be normalized to start at 0: {offs}")
        if any(b <= a for a, b in zip(offs, offs[1:])):
            raise ValueError(f"offsets must be strictly increasing: {offs}")

    @classmethod
    def normalized(cls, values) -> "OffsetTuple":
        """Build from arbitrary distinct integers by sorting and shifting to 0."""
        vals = sorted(values)
        if len(set(vals)) != len(vals):
            raise ValueError(f"offsets must be distinct: {values}")
        base = vals[0]
        return cls(tuple(v - base for v in vals))

    @property
    def k(self) -> int:
        return len(self.offsets)

    @property
    def diameter(self) -> int:
        return self.offsets[-1]


@dataclass(frozen=True)
class SingularValue:
    """A singular-series value with its truncation prime and tail-error bound."""

    value: float
    truncation_prime: int
    tail_bound: float
    admissible: bool


def residue_occupancy(H: OffsetTuple, p: int) -> int:
    """nu_H(p): number of distinct residue classes mod p occupied by H."""
    if not trial_is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    return len({o % p for o in H.offsets})


@lru_cache(maxsize=None)
def _prime_zeta(j: int) -> float:
    with mpmath.workdps(30):
        return float(mpmath.primezeta(j))


@lru_cache(maxsize=64)
def _primes_upto(limit: int) -> np.ndarray:
    ps = simple_primes(limit)
    ps.setflags(write=False)
    return ps


@lru_cache(maxsize=256)
def _tail_log(k: int, P: int) -> float:
    """log prod_{p > P} (1 - 1/p)^(-k) (1 - k/p), P >= max(2k, 53)."""
    pf = _primes_upto(P).astype(np.float64)
    total = 0.0
    for j in range(2, _TAIL_SERIES_ORDER + 1):
        coeff = (k - float(k) ** j) / j
        tail_j = _prime_zeta(j) - float(np.sum(pf ** float(-j)))
        term = coeff * tail_j
        total += term
        if j > 4 and abs(term) < 1e-22:
            break
    return total


def _tail_bound(k: int, P: int) -> float:
    """Rigorous bound on the relative error from primes > P.

    The j-series remainder past J = 64 is geometrically bounded; prime
    zeta tails use sum_{n > P} n^(-j) <= P^(1-j)/(j-1) as a majorant.
    """
    J = _TAIL_SERIES_ORDER
    ratio = k / P
    remainder = P * ratio ** (J + 1) / (J * (J + 1) * (1.0 - ratio))
    return math.expm1(remainder + _TAIL_SERIES_ORDER * _ZETA_EPS)


def _occupancy_vector(offsets: np.ndarray, ps: np.ndarray) -> np.ndarray:
    """nu_H(p) for every p in ps at once."""
    res = offsets[np.newaxis, :] % ps[:, np.newaxis]
    res.sort(axis=1)
    return 1 + (np.diff(res, axis=1) != 0).sum(axis=1)


def singular_series(
    H: OffsetTuple,
    rel_tol: float = DEFAULT_REL_TOL,
    truncation_cap: int = TRUNCATION_CAP,
) -> SingularValue:
    """Singular series of H via a finite Euler product plus analytic tail.

    Exactly zero (admissible = False) when some prime p has nu_H(p) = p,
    which can only happen for p <= k.  Otherwise the returned value is
    within ``tail_bound`` <= ``rel_tol`` relative error of the infinite
    product, up to double rounding in the finite part.
    """
    if not 0 < rel_tol < 1:
        raise ValueError(f"rel_tol must be in (0, 1), got {rel_tol}")
    k = H.k
    if k == 1:
        return SingularValue(1.0, _MIN_TRUNCATION, 0.0, True)
    P = max(H.diameter, 2 * k, _MIN_TRUNCATION)
    if P > truncation_cap:
        bound = _tail_bound(k, truncation_cap)
        raise ToleranceUnachievable(
            f"tuple diameter {H.diameter} exceeds truncation cap {truncation_cap}; "
            f"best bound at the cap is {bound:.3e}",
            best_bound=bound,
        )
    ps = _primes_upto(P)
    nu = _occupancy_vector(np.array(H.offsets, dtype=np.int64), ps)
    if np.any(nu == ps):
        p_hit = int(ps[np.argmax(nu == ps)])
        return SingularValue(0.0, p_hit, 0.0, False)
    bound = _tail_bound(k, P)
    if bound > rel_tol:
        raise ToleranceUnachievable(
            f"tail bound {bound:.3e} exceeds rel_tol {rel_tol:.3e}", best_bound=bound
        )
    pf = ps.astype(np.float64)
    log_finite = float(np.sum(-k * np.log1p(-1.0 / pf) + np.log1p(-nu / pf)))
    value = math.exp(log_finite + _tail_log(k, P))
    return SingularValue(value, P, bound, True)


def twin_constant(
    rel_tol: float = DEFAULT_REL_TOL,
    truncation_prime: int | None = None,
) -> SingularValue:
    """The twin prime constant prod_{p>2} (1 - (p-1)^(-2)).

    With ``truncation_prime`` set, returns the plain truncated product
    with the telescoping tail bound 1/(P-1); otherwise the analytically
    tailed product (half the pair singular series at d = 2).
    """
    if not 0 < rel_tol < 1:
        raise ValueError(f"rel_tol must be in (0, 1), got {rel_tol}")
    if truncation_prime is None:
        s = singular_series(OffsetTuple((0, 2)), rel_tol)
        return SingularValue(s.value / 2.0, s.truncation_prime, s.tail_bound, True)
    P = truncation_prime
    if P < 3:
        raise ValueError(f"truncation_prime must be >= 3, got {P}")
    # omitted factors all lie in (0, 1): prod_{n>=P}(1 - 1/n^2) telescopes to (P-1)/P
    bound = 1.0 / (P - 1)
    if bound > rel_tol:
        raise ToleranceUnachievable(
            f"truncated tail bound {bound:.3e} exceeds rel_tol {rel_tol:.3e}",
            best_bound=bound,
        )
    pf = _primes_upto(P).astype(np.float64)
    pf = pf[pf > 2]
    value = math.exp(float(np.sum(np.log1p(-((pf - 1.0) ** -2)))))
    return SingularValue(value, P, bound, True)


def _factor_odd_primes(d: int) -> list[int]:
    out = []
    dd = d
    while dd % 2 == 0:
        dd //= 2
    f = 3
    while f * f <= dd:
        if dd % f == 0:
            out.append(f)
            while dd % f == 0:
                dd //= f
        f += 2
    if dd > 1:
        out.append(dd)
    return out


def pair_singular(d: int, rel_tol: float = DEFAULT_REL_TOL) -> SingularValue:
    """The pair singular series: 0 for odd d, else 2*C2 * prod_{p|d, p>2} (p-1)/(p-2)."""
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if d % 2:
        return SingularValue(0.0, 2, 0.0, False)
    c2 = twin_constant(rel_tol)
    value = 2.0 * c2.value
    for p in _factor_odd_primes(d):
        value *= (p - 1) / (p - 2)
    return SingularValue(value, c2.truncation_prime, c2.tail_bound, True)


def _inner_tuples(k: int, d: int, cap: int):
    size = math.comb(d - 1, k - 2)
    if size > cap:
        raise CapExceeded(
            f"enumeration of C({d - 1}, {k - 2}) = {size} inner tuples exceeds the "
            f"cap {cap}; use a smaller d or k"
        )
    return combinations(range(1, d), k - 2)


def series_average(
    k: int,
    d: int,
    rel_tol: float = DEFAULT_REL_TOL,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> float:
    """Sum of the singular series over all inner tuples 0 < d_1 < ... < d_{k-2} < d.

    Every admissible term shares the diameter d, hence one truncation
    prime and one analytic tail constant; per-term work is one pass over
    the primes up to d.  Terms are accumulated with exact summation.
    """
    if k < 3:
        raise ValueError(f"k must be >= 3, got {k}")
    if d < 2 or d % 2:
        raise ValueError(f"d must be even and >= 2, got {d}")
    P = max(d, 2 * k, _MIN_TRUNCATION)
    bound = _tail_bound(k, P)
    if bound > rel_tol:
        raise ToleranceUnachievable(
            f"tail bound {bound:.3e} exceeds rel_tol {rel_tol:.3e}", best_bound=bound
        )
    ps = _primes_upto(P)
    pf = ps.astype(np.float64)
    const = float(np.sum(-k * np.log1p(-1.0 / pf)))
    tail = _tail_log(k, P)
    small = ps[ps <= k]
    terms = []
    for inner in _inner_tuples(k, d, enumeration_cap):
        if any(o % 2 for o in inner):
            continue  # nu(2) = 2: never admissible alongside 0 and even d
        offsets = np.array((0, *inner, d), dtype=np.int64)
        nu_small = _occupancy_vector(offsets, small)
        if np.any(nu_small == small):
            continue
        nu = _occupancy_vector(offsets, ps)
        terms.append(math.exp(const + float(np.sum(np.log1p(-nu / pf))) + tail))
    return math.fsum(terms)


def average_error(
    k: int,
    d: int,
    rel_tol: float = DEFAULT_REL_TOL,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> float:
    """Deviation of the tuple average from its main term S(d) * d^(k-2)/(k-2)!."""
    a = series_average(k, d, rel_tol, enumeration_cap)
    main = pair_singular(d, rel_tol).value * d ** (k - 2) / math.factorial(k - 2)
    return a - main


def average_table(
    k: int,
    d_values,
    rel_tol: float = DEFAULT_REL_TOL,
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
) -> list[dict]:
    """Rows (k, d, A_k, main_term, E_k, ratio) for the given even gaps."""
    rows = []
    for d in d_values:
        a = series_average(k, d, rel_tol, enumeration_cap)
        main = pair_singular(d, rel_tol).value * d ** (k - 2) / math.factorial(k - 2)
        rows.append(
            {
                "k": k,
                "d": d,
                "A_k": a,
                "main_term": main,
                "E_k": a - main,
                "ratio": a / main if main else math.nan,
            }
        )
    return rows


def write_average_csv(rows: list[dict], path: str | Path) -> None:
    lines = ["k,d,A_k,main_term,E_k,ratio"]
    for r in rows:
        lines.append(
            f"{r['k']},{r['d']},{r['A_k']:.15g},{r['main_term']:.15g},"
            f"{r['E_k']:.15g},{r['ratio']:.15g}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
