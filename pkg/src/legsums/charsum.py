"""Exact partial sums of Legendre symbols and positivity density scans.

The central quantity is the partial sum of (n/p) over 1 <= n <= floor(alpha*p).
For rational alpha the cutoff floor(alpha*p) is computed in exact integer
arithmetic; for irrational alpha a float floor is used and near-integer
boundary hits are logged.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .primes import first_primes, is_prime, jacobi, primes_up_to

__all__ = [
    "QRTable",
    "DensityReport",
    "DirichletCheck",
    "parse_alpha",
    "alpha_cutoff",
    "build_qr_table",
    "legendre_sum",
    "density_scan",
    "class_number_h",
    "dirichlet_check",
    "expectation_scan",
]

log = logging.getLogger(__name__)

#: |alpha*p - nearest integer| below which a float cutoff is considered a
#: boundary hit and logged.
BOUNDARY_EPS = 1e-9

Alpha = Fraction | float | int


def parse_alpha(text: str) -> Alpha:
    """Parse an alpha argument: 'a/b' gives an exact Fraction, else float."""
    if "/" in text:
        return Fraction(text)
    return float(text)


def _check_alpha(alpha: Alpha) -> None:
    if not (0 <= alpha < 1):
        raise ValueError(f"alpha must lie in [0, 1), got {alpha}")


def alpha_cutoff(alpha: Alpha, p: int) -> int:
    """floor(alpha * p), exactly for rational alpha.

    Float alphas within BOUNDARY_EPS of an integer multiple are logged: the
    count convention at such a boundary is not reliable in floating point.
    """
    _check_alpha(alpha)
    if isinstance(alpha, Fraction):
        return (alpha.numerator * p) // alpha.denominator
    x = alpha * p
    if abs(x - round(x)) < BOUNDARY_EPS:
        log.warning("boundary hit: alpha*p = %r for alpha=%r, p=%d", x, alpha, p)
    return math.floor(x)


@dataclass(frozen=True)
class QRTable:
    """Quadratic-residue prefix counts modulo an odd prime p.

    prefix[m] is the number of quadratic residues in [1, m], for
    0 <= m <= p-1, so the Legendre partial sum over [1, m] is
    2*prefix[m] - m.
    """

    p: int
    prefix: np.ndarray = field(repr=False)

    def partial_sum(self, m: int) -> int:
        return 2 * int(self.prefix[m]) - m


def build_qr_table(p: int) -> QRTable:
    """Residue indicator built from k^2 mod p, prefix-summed; O(p)."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"build_qr_table needs an odd prime, got {p}")
    k = np.arange(1, (p + 1) // 2, dtype=np.int64)
    indicator = np.zeros(p, dtype=np.int64)
    indicator[(k * k) % p] = 1
    prefix = np.cumsum(indicator)
    prefix.setflags(write=False)
    return QRTable(p=p, prefix=prefix)


def legendre_sum(alpha: Alpha, p: int, table: QRTable | None = None) -> int:
    """Exact partial sum of Legendre symbols (n/p) for n <= floor(alpha*p).

    For p = 2 every symbol in the range is taken as 0, so the sum is 0
    (see density_scan for why p = 2 participates in scans at all).
    """
    _check_alpha(alpha)
    if p == 2:
        return 0
    if table is None:
        table = build_qr_table(p)
    elif table.p != p:
        raise ValueError(f"table is for p={table.p}, not p={p}")
    return table.partial_sum(alpha_cutoff(alpha, p))


@dataclass
class DensityReport:
    """Counts of primes with nonnegative / strictly positive partial sums.

    The scan covers the first ``prime_count`` primes including p = 2, whose
    partial sum is 0 by convention and therefore lands in zero_count; p = 2
    belongs to neither mod-4 class, so
    nonneg_1mod4 + nonneg_3mod4 + (1 if p=2 scanned) == nonneg_count.
    """

    alpha: Alpha
    mode: str
    prime_count: int = 0
    nonneg_count: int = 0
    strict_pos_count: int = 0
    zero_count: int = 0
    nonneg_1mod4: int = 0
    nonneg_3mod4: int = 0
    strict_pos_1mod4: int = 0
    strict_pos_3mod4: int = 0
    includes_two: bool = False

    def merge(self, other: "DensityReport") -> "DensityReport":
        if (self.alpha, self.mode) != (other.alpha, other.mode):
            raise ValueError("cannot merge reports for different scans")
        for name in (
            "prime_count",
            "nonneg_count",
            "strict_pos_count",
            "zero_count",
            "nonneg_1mod4",
            "nonneg_3mod4",
            "strict_pos_1mod4",
            "strict_pos_3mod4",
        ):
            setattr(self, name, getattr(self, name) + getattr(other, name))
        self.includes_two = self.includes_two or other.includes_two
        return self

    @property
    def count(self) -> int:
        """The counter selected by the comparison mode."""
        return self.nonneg_count if self.mode == "ge" else self.strict_pos_count

    def as_dict(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "primes": self.prime_count,
            "nonneg": self.nonneg_count,
            "strictpos": self.strict_pos_count,
            "zero": self.zero_count,
            "nonneg_1mod4": self.nonneg_1mod4,
            "nonneg_3mod4": self.nonneg_3mod4,
            "mode": self.mode,
        }

    def as_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(self.as_dict()), lineterminator="\n")
        if header:
            writer.writeheader()
        writer.writerow(self.as_dict())
        return buf.getvalue()

    def as_json(self) -> str:
        return json.dumps(self.as_dict())


def _scan_chunk(alpha: Alpha, primes: np.ndarray, mode: str) -> DensityReport:
    report = DensityReport(alpha=alpha, mode=mode)
    for p in primes.tolist():
        if p == 2:
            value = 0
            report.includes_two = True
        else:
            k = np.arange(1, (p + 1) // 2, dtype=np.int64)
            residues = (k * k) % p
            residues.sort()
            m = alpha_cutoff(alpha, p)
            value = 2 * int(np.searchsorted(residues, m, side="right")) - m
        report.prime_count += 1
        if value >= 0:
            report.nonneg_count += 1
            if p % 4 == 1:
                report.nonneg_1mod4 += 1
            elif p % 4 == 3:
                report.nonneg_3mod4 += 1
        if value > 0:
            report.strict_pos_count += 1
            if p % 4 == 1:
                report.strict_pos_1mod4 += 1
            elif p % 4 == 3:
                report.strict_pos_3mod4 += 1
        if value == 0:
            report.zero_count += 1
    return report


def density_scan(
    alpha: Alpha,
    num_primes: int,
    mode: str = "ge",
    threads: int = 1,
) -> DensityReport:
    """Scan the first num_primes primes, counting signs of the partial sums.

    The result is a sum of order-insensitive per-prime counters, so it is
    independent of thread count and scheduling.
    """
    _check_alpha(alpha)
    if num_primes < 1:
        raise ValueError("num_primes must be >= 1")
    if mode not in ("ge", "gt"):
        raise ValueError(f"mode must be 'ge' or 'gt', got {mode!r}")
    primes = first_primes(num_primes)
    if threads <= 1:
        return _scan_chunk(alpha, primes, mode)
    chunks = np.array_split(primes, threads * 4)
    report = DensityReport(alpha=alpha, mode=mode)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for part in pool.map(lambda c: _scan_chunk(alpha, c, mode), chunks):
            report.merge(part)
    return report


def class_number_h(p: int) -> int:
    """Class number h(-p) for p ≡ 3 (mod 4), by counting reduced binary
    quadratic forms (a, b, c) of discriminant b^2 - 4ac = -p.

    Reduced means |b| <= a <= c with b > 0 whenever |b| = a or a = c.
    Independent of any L-function machinery; O(p) work.
    """
    if p % 4 != 3 or not is_prime(p):
        raise ValueError(f"class_number_h needs a prime p ≡ 3 (mod 4), got {p}")
    count = 0
    a = 1
    while 3 * a * a <= p:
        # -p ≡ b^2 (mod 4) forces b odd
        for b in range(1, a + 1, 2):
            num = b * b + p
            if num % (4 * a) == 0:
                c = num // (4 * a)
                if c >= a:
                    count += 1  # the b > 0 form
                    if b != a and a != c:
                        count += 1  # its distinct -b companion
        a += 1
    return count


@dataclass(frozen=True)
class DirichletCheck:
    """Both sides of the class-number identity for the half-length sum."""

    p: int
    lhs: int
    rhs: int
    excluded: bool = False

    @property
    def ok(self) -> bool:
        return self.excluded or self.lhs == self.rhs


def dirichlet_check(p: int) -> DirichletCheck:
    """Verify the half-length sum against the class-number formula.

    For p ≡ 1 (mod 4) the sum is 0; for p ≡ 3 (mod 4) it equals
    (2 - (2/p)) * h(-p).  p = 3 is excluded (the identity as written needs
    p > 3: the two sides are 1 and 3 there) and flagged, not failed.
    """
    if p == 2 or not is_prime(p):
        raise ValueError(f"dirichlet_check needs an odd prime, got {p}")
    lhs = legendre_sum(Fraction(1, 2), p)
    if p == 3:
        return DirichletCheck(p=3, lhs=lhs, rhs=3 * class_number_h(3), excluded=True)
    if p % 4 == 1:
        rhs = 0
    else:
        rhs = (2 - jacobi(2, p)) * class_number_h(p)
    return DirichletCheck(p=p, lhs=lhs, rhs=rhs)


def expectation_scan(n: int, x: int, eps: int) -> float:
    """Mean of (n/p) over primes p <= x with p ≡ eps (mod 4), skipping p | n.

    For square n this is exactly 1; for non-square n it decays as x grows.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    residue = 1 if eps == 1 else 3
    primes = [p for p in primes_up_to(x).tolist() if p % 4 == residue and n % p != 0]
    if not primes:
        raise ValueError(f"no primes ≡ {residue} (mod 4) up to {x} coprime to {n}")
    return sum(jacobi(n, p) for p in primes) / len(primes)
