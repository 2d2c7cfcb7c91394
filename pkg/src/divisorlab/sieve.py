"""Segmented smallest-prime-factor sieve and multiplicative prefix sums.

Computes d(n^2), 2^omega(n), |mu(n)|, d(n), d(n)^2 exactly for all n up to a
limit, segment by segment, and accumulates their prefix sums in exact Python
integers.  Segments are independent work units; the reduction is integer
addition in fixed segment order, so results are bit-identical for any segment
size and any worker count.

Local rules at a prime power p^a:
    d(n^2)    : 2a + 1
    2^omega   : 2
    |mu|      : 1 if a == 1 else 0
    d         : a + 1
    d(n)^2    : (a + 1)^2  (accumulated as d, squared at the end)
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from math import isqrt
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CapacityError, DomainError

#: Documented sieve limit cap: keeps sqrt(limit) sieving and memory planning safe.
LIMIT_CAP = 1 << 40

DEFAULT_SEGMENT_SIZE = 1 << 18


class ArithmeticFunction(Enum):
    """Multiplicative functions whose prefix sums the library computes."""

    D_SQUARE = "d_square"      # d(n^2)
    TWO_OMEGA = "two_omega"    # 2^omega(n)
    MU_SQUARED = "mu_squared"  # |mu(n)|
    D = "d"                    # d(n)
    D_SQUARED = "d_squared"    # d(n)^2


def _local_factor(function: ArithmeticFunction, exponents: np.ndarray) -> np.ndarray:
    """Vectorized local rule: multiplier contributed by p^a for each exponent a."""
    if function is ArithmeticFunction.D_SQUARE:
        return 2 * exponents + 1
    if function is ArithmeticFunction.TWO_OMEGA:
        return np.full_like(exponents, 2)
    if function is ArithmeticFunction.MU_SQUARED:
        return (exponents == 1).astype(np.int64)
    # D and D_SQUARED accumulate d(n); D_SQUARED squares afterwards.
    return exponents + 1


def _local_factor_int(function: ArithmeticFunction, a: int) -> int:
    if function is ArithmeticFunction.D_SQUARE:
        return 2 * a + 1
    if function is ArithmeticFunction.TWO_OMEGA:
        return 2
    if function is ArithmeticFunction.MU_SQUARED:
        return 1 if a == 1 else 0
    return a + 1


def small_primes(limit: int) -> np.ndarray:
    """Primes <= limit by a plain Eratosthenes sieve."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for i in range(2, isqrt(limit) + 1):
        if is_prime[i]:
            is_prime[i * i:: i] = False
    return np.nonzero(is_prime)[0].astype(np.int64)


@dataclass
class SieveSegment:
    """Complete factorization data for all n in [lo, hi].

    prime_hits holds, for each prime p <= sqrt(limit) with a multiple in the
    segment, the offsets (n - lo) of those multiples and the exact p-adic
    valuations of n at them.  residual[n - lo] is the cofactor of n after all
    listed primes are divided out: either 1 or a single prime > sqrt(limit).
    """

    lo: int
    hi: int
    prime_hits: list[tuple[int, np.ndarray, np.ndarray]]
    residual: np.ndarray

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def factorization(self, n: int) -> list[tuple[int, int]]:
        """Exact prime factorization of n, which must lie in the segment."""
        if not self.lo <= n <= self.hi:
            raise DomainError(f"{n} outside segment [{self.lo}, {self.hi}]")
        off = n - self.lo
        factors = []
        for p, offsets, exps in self.prime_hits:
            pos = np.searchsorted(offsets, off)
            if pos < len(offsets) and offsets[pos] == off:
                factors.append((p, int(exps[pos])))
        r = int(self.residual[off])
        if r > 1:
            factors.append((r, 1))
        return factors

    def values(self, function: ArithmeticFunction) -> np.ndarray:
        """Function values for every n in the segment, as int64."""
        vals = np.ones(len(self), dtype=np.int64)
        for _, offsets, exps in self.prime_hits:
            vals[offsets] *= _local_factor(function, exps)
        big = self.residual > 1
        if big.any():
            vals[big] *= _local_factor_int(function, 1)
        if function is ArithmeticFunction.D_SQUARED:
            vals = vals * vals
        return vals


@dataclass(frozen=True)
class PrefixSumResult:
    """Exact prefix sum of one arithmetic function up to x."""

    x: int
    value: int
    function: ArithmeticFunction


def _check_limit(limit: int) -> None:
    if limit < 1:
        raise DomainError("sieve limit must be >= 1")
    if limit > LIMIT_CAP:
        raise CapacityError(f"sieve limit {limit} exceeds cap 2^40")


def segment_bounds(limit: int, segment_size: int) -> list[tuple[int, int]]:
    """[lo, hi] pairs tiling [1, limit] exactly once."""
    _check_limit(limit)
    if segment_size < 2:
        raise DomainError("segment_size must be >= 2")
    return [
        (lo, min(lo + segment_size - 1, limit))
        for lo in range(1, limit + 1, segment_size)
    ]


def sieve_segment(lo: int, hi: int, primes: np.ndarray) -> SieveSegment:
    """Factor every n in [lo, hi] using the supplied prime list."""
    length = hi - lo + 1
    residual = np.arange(lo, hi + 1, dtype=np.int64)
    prime_hits: list[tuple[int, np.ndarray, np.ndarray]] = []
    for p in primes:
        p = int(p)
        if p * p > hi:
            break
        start = ((lo + p - 1) // p) * p
        if start > hi:
            continue
        offsets = np.arange(start - lo, length, p)
        m = residual[offsets] // p
        exps = np.ones(len(offsets), dtype=np.int64)
        while True:
            div = m % p == 0
            if not div.any():
                break
            m[div] //= p
            exps[div] += 1
        residual[offsets] = m
        prime_hits.append((p, offsets, exps))
    return SieveSegment(lo=lo, hi=hi, prime_hits=prime_hits, residual=residual)


def build_sieve(
    limit: int, segment_size: int = DEFAULT_SEGMENT_SIZE
) -> Iterator[SieveSegment]:
    """Yield factorization segments covering [1, limit] in ascending order."""
    bounds = segment_bounds(limit, segment_size)
    primes = small_primes(isqrt(limit))
    for lo, hi in bounds:
        yield sieve_segment(lo, hi, primes)


def evaluate(function: ArithmeticFunction, factorization: Sequence[tuple[int, int]]) -> int:
    """Multiplicative function value from an exact factorization [(p, a), ...]."""
    value = 1
    for _, a in factorization:
        value *= _local_factor_int(function, a)
    if function is ArithmeticFunction.D_SQUARED:
        value *= value
    return value


def function_values(
    function: ArithmeticFunction,
    limit: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
) -> Iterator[np.ndarray]:
    """Stream int64 arrays of f(n) for n in each segment of [1, limit]."""
    for seg in build_sieve(limit, segment_size):
        yield seg.values(function)


def prefix_sum(
    function: ArithmeticFunction,
    x: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
) -> PrefixSumResult:
    """Exact sum of f(n) for n <= x, as an unbounded Python integer.

    Segments are independent; with workers > 1 they are sieved concurrently
    and reduced in ascending segment order, so the result is deterministic.
    """
    _check_limit(x)
    bounds = segment_bounds(x, segment_size)
    primes = small_primes(isqrt(x))

    def one(bound: tuple[int, int]) -> int:
        lo, hi = bound
        return int(sieve_segment(lo, hi, primes).values(function).sum())

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(one, bounds))
    else:
        partials = [one(b) for b in bounds]
    total = 0
    for part in partials:  # fixed ascending order
        total += part
    return PrefixSumResult(x=x, value=total, function=function)


def prefix_sums_at(
    function: ArithmeticFunction,
    xs: Iterable[int],
    segment_size: int = DEFAULT_SEGMENT_SIZE,
) -> dict[int, int]:
    """Prefix sums at several cut points in one ascending sieve pass."""
    cuts = sorted(set(int(x) for x in xs))
    if not cuts:
        return {}
    if cuts[0] < 1:
        raise DomainError("prefix sum cut points must be >= 1")
    limit = cuts[-1]
    out: dict[int, int] = {}
    running = 0
    pending = list(cuts)
    for seg in build_sieve(limit, segment_size):
        csum = np.cumsum(seg.values(function))
        while pending and pending[0] <= seg.hi:
            x = pending.pop(0)
            out[x] = running + int(csum[x - seg.lo])
        running += int(csum[-1])
    return out


def trial_factorize(n: int) -> list[tuple[int, int]]:
    """Trial-division factorization; the independent oracle for the sieve."""
    if n < 1:
        raise DomainError("n must be >= 1")
    factors = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            a = 0
            while m % p == 0:
                m //= p
                a += 1
            factors.append((p, a))
        p += 1 if p == 2 else 2
    if m > 1:
        factors.append((m, 1))
    return factors


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def identity_check(n: int) -> tuple[bool, bool, bool]:
    """Truth of the three Dirichlet-convolution identities at n.

    Checked by explicit divisor enumeration:
        d(n^2)  == sum over d | n of 2^omega(d)
        2^omega == sum over d | n of |mu(d)|
        d(n)^2  == sum over d | n of d(d^2)
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    divs = [trial_factorize(d) for d in divisors(n)]
    fac_n = trial_factorize(n)
    lhs1 = evaluate(ArithmeticFunction.D_SQUARE, fac_n)
    rhs1 = sum(evaluate(ArithmeticFunction.TWO_OMEGA, f) for f in divs)
    lhs2 = evaluate(ArithmeticFunction.TWO_OMEGA, fac_n)
    rhs2 = sum(evaluate(ArithmeticFunction.MU_SQUARED, f) for f in divs)
    lhs3 = evaluate(ArithmeticFunction.D_SQUARED, fac_n)
    rhs3 = sum(evaluate(ArithmeticFunction.D_SQUARE, f) for f in divs)
    return (lhs1 == rhs1, lhs2 == rhs2, lhs3 == rhs3)


def identity_check_range(limit: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> bool:
    """Verify all three convolution identities for every n <= limit.

    Batch form of identity_check: builds value tables with the sieve and
    forms each divisor sum with one harmonic pass h[d::d] += g[d].
    """
    _check_limit(limit)
    tables = {}
    needed = (
        ArithmeticFunction.D_SQUARE,
        ArithmeticFunction.TWO_OMEGA,
        ArithmeticFunction.MU_SQUARED,
        ArithmeticFunction.D_SQUARED,
    )
    arrays = {f: np.empty(limit + 1, dtype=np.int64) for f in needed}
    for seg in build_sieve(limit, segment_size):
        for f in needed:
            arrays[f][seg.lo: seg.hi + 1] = seg.values(f)
    for f in needed:
        arrays[f][0] = 0
        tables[f] = arrays[f]

    def convolve_with_one(g: np.ndarray) -> np.ndarray:
        h = np.zeros(limit + 1, dtype=np.int64)
        for d in range(1, limit + 1):
            h[d::d] += g[d]
        return h

    pairs = [
        (ArithmeticFunction.TWO_OMEGA, ArithmeticFunction.D_SQUARE),
        (ArithmeticFunction.MU_SQUARED, ArithmeticFunction.TWO_OMEGA),
        (ArithmeticFunction.D_SQUARE, ArithmeticFunction.D_SQUARED),
    ]
    for g_fn, f_fn in pairs:
        h = convolve_with_one(tables[g_fn])
        if not np.array_equal(h[1:], tables[f_fn][1:]):
            return False
    return True
