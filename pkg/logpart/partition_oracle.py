"""Exact partition numbers — ground truth for every approximation in the package.

p(n) comes from Euler's pentagonal-number recurrence over an append-only table.
An independent enumeration oracle (recursion over the largest part) cross-checks
it for small n.
"""

from __future__ import annotations

import logging
import threading
from collections.abc import Sequence
from functools import lru_cache
from math import comb, log, pi

from constants import BRUTE_FORCE_MAX_N

logger = logging.getLogger(__name__)


class EnumerationBudgetError(ValueError):
    """Direct enumeration was asked for an n beyond its budget."""


# ===================================================================
#  Pentagonal recurrence table
# ===================================================================


class PartitionTable:
    """Memoized p(0..max_n), grown on demand.

    Growth happens under a lock; entries are never rewritten, so indices below
    max_n can be read from any thread without locking.
    """

    def __init__(self):
        self._values: list[int] = [1]
        self._lock = threading.Lock()

    @property
    def max_n(self) -> int:
        return len(self._values) - 1

    @property
    def values(self) -> Sequence[int]:
        return tuple(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __getitem__(self, n: int) -> int:
        if n > self.max_n:
            self.extend_to(n)
        return self._values[n]

    def extend_to(self, n: int) -> None:
        if n <= self.max_n:
            return
        with self._lock:
            start = len(self._values)
            values = self._values
            for m in range(start, n + 1):
                values.append(self._next_value(values, m))
            if n >= start:
                logger.debug(f"Partition table extended from {start - 1} to {n}")

    @staticmethod
    def _next_value(values: list[int], m: int) -> int:
        # p(m) = sum_k (-1)^(k+1) [p(m - k(3k-1)/2) + p(m - k(3k+1)/2)]
        total = 0
        k = 1
        while True:
            first = k * (3 * k - 1) // 2
            if first > m:
                break
            second = first + k
            term = values[m - first]
            if second <= m:
                term += values[m - second]
            total += term if k & 1 else -term
            k += 1
        return total


_TABLE = PartitionTable()


def partition_table() -> PartitionTable:
    return _TABLE


def ensure_table(n: int) -> None:
    """Build p(0..n) up front, before a sweep fans out across threads."""
    if n >= 0:
        _TABLE.extend_to(n)


def p_exact(n: int) -> int:
    """Number of partitions of n (p(0) = 1)."""
    if n < 0:
        raise ValueError(f"p(n) needs n >= 0, got {n}")
    return _TABLE[n]


# ===================================================================
#  Enumeration oracle
# ===================================================================


@lru_cache(maxsize=None)
def _count_with_largest_at_most(n: int, largest: int) -> int:
    if n == 0:
        return 1
    parts = range(1, min(n, largest) + 1)
    return sum(_count_with_largest_at_most(n - part, part) for part in parts)


def p_brute(n: int) -> int:
    """Count partitions of n by memoized counting over the largest part.

    Shares nothing with the pentagonal recurrence behind p_exact.
    """
    if n < 0:
        raise ValueError(f"p(n) needs n >= 0, got {n}")
    if n > BRUTE_FORCE_MAX_N:
        raise EnumerationBudgetError(
            f"enumeration budget is n <= {BRUTE_FORCE_MAX_N}, got n = {n}"
        )
    return _count_with_largest_at_most(n, n)


# ===================================================================
#  Finite differences
# ===================================================================


def delta_r_p(n: int, r: int) -> int:
    """Δ^r p(n) = sum_k (-1)^(r-k) C(r,k) p(n+k), exactly."""
    if r < 1:
        raise ValueError(f"difference order must be >= 1, got {r}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return sum((-1) ** (r - k) * comb(r, k) * p_exact(n + k) for k in range(r + 1))


def empirical_sign_threshold_p(r: int, n_max: int) -> int | None:
    """Smallest n0 with Δ^r p(n) > 0 for every n0 <= n <= n_max, or None.

    Only the range up to n_max is examined and the INFO log records that bound;
    positivity beyond it is not claimed.
    """
    if r < 1:
        raise ValueError(f"difference order must be >= 1, got {r}")
    if n_max < r:
        raise ValueError(f"n_max must be >= r, got n_max={n_max}, r={r}")
    ensure_table(n_max + r)
    threshold = None
    for n in range(n_max, -1, -1):
        if delta_r_p(n, r) <= 0:
            break
        threshold = n
    logger.info(f"Sign threshold of Δ^{r} p: {threshold} (certified only up to n = {n_max})")
    return threshold


def good_asymptotic(r: int) -> float:
    """(6/π²)·r²·log²r, the leading-order size of the Δ^r p sign threshold."""
    if r < 1:
        raise ValueError(f"difference order must be >= 1, got {r}")
    return 6 / pi**2 * r * r * log(r) ** 2
