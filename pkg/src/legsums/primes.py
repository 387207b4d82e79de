"""Prime generation and quadratic-symbol primitives.

Everything here is pure and immutable after construction, so it is safe to
share between threads without locking (the lazily grown module-level sieve
cache is guarded internally).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PrimeTable",
    "sieve_primes",
    "nth_prime",
    "first_primes",
    "primes_up_to",
    "is_prime",
    "jacobi",
    "kronecker_chi",
]


@dataclass(frozen=True)
class PrimeTable:
    """All primes up to ``limit``, with residue-class-mod-4 counts."""

    limit: int
    primes: np.ndarray = field(repr=False)
    count_1mod4: int
    count_3mod4: int

    def __len__(self) -> int:
        return len(self.primes)


def _sieve_array(limit: int) -> np.ndarray:
    """Boolean primality array for 0..limit (plain Eratosthenes)."""
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return mask


def sieve_primes(limit: int) -> PrimeTable:
    """Sieve all primes up to and including ``limit``.

    Raises ValueError for limit < 2 (the table would be empty).
    """
    if limit < 2:
        raise ValueError(f"sieve limit must be >= 2, got {limit}")
    mask = _sieve_array(limit)
    primes = np.nonzero(mask)[0].astype(np.int64)
    primes.setflags(write=False)
    r = primes % 4
    return PrimeTable(
        limit=limit,
        primes=primes,
        count_1mod4=int(np.count_nonzero(r == 1)),
        count_3mod4=int(np.count_nonzero(r == 3)),
    )


# Lazily grown shared table, so "first N primes" scans don't re-sieve.
_cache_lock = threading.Lock()
_cached: PrimeTable = sieve_primes(1 << 16)


def _grown_to(limit: int) -> PrimeTable:
    global _cached
    with _cache_lock:
        if _cached.limit < limit:
            _cached = sieve_primes(limit)
        return _cached


def _nth_prime_bound(n: int) -> int:
    """Upper bound for the n-th prime (Rosser-type, valid for n >= 6)."""
    if n < 6:
        return 13
    x = float(n)
    return int(x * (math.log(x) + math.log(math.log(x)))) + 1


def nth_prime(n: int) -> int:
    """The n-th prime in natural order (nth_prime(1) == 2)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    table = _grown_to(_nth_prime_bound(n))
    while len(table) < n:
        table = _grown_to(table.limit * 2)
    return int(table.primes[n - 1])


def first_primes(n: int) -> np.ndarray:
    """Array of the first n primes."""
    if n < 1:
        raise ValueError("n must be >= 1")
    table = _grown_to(_nth_prime_bound(n))
    while len(table) < n:
        table = _grown_to(table.limit * 2)
    return table.primes[:n]


def primes_up_to(limit: int) -> np.ndarray:
    """Array of all primes <= limit."""
    table = _grown_to(max(limit, 2))
    return table.primes[: int(np.searchsorted(table.primes, limit, side="right"))]


def is_prime(n: int) -> bool:
    """Deterministic primality check by trial division."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1, by binary reciprocity.

    Coincides with the Legendre symbol when n is an odd prime; fully
    multiplicative in both arguments; 0 iff gcd(a, n) > 1.
    """
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol needs positive odd n, got {n}")
    a %= n
    result = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker_chi(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for a != 0, defined for every integer n.

    For a not congruent to 3 (mod 4) it is periodic in n with period
    dividing 4|a|, and it is the principal character of that period exactly
    when a is a perfect square.
    """
    if a == 0:
        raise ValueError("kronecker_chi requires a != 0")
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    if n == 0:
        return 1 if a in (1, -1) else 0
    # strip factors of 2 from n; (a/2) = 0, +1, -1 by a mod 8
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    # now n odd and positive
    if a < 0 and n % 4 == 3:
        result = -result
    return result * jacobi(abs(a), n)
