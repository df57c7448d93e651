"""Hardy–Ramanujan–Rademacher term algebra.

The first two summands f1, f2 of the HRR series (A1 = 1, A2 = (−1)^n), the
bound g(n) on the k >= 3 tail, Lehmer's bound on the remainder after N terms,
and the ratio bounds that relate them.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath import libmp

from constants import GUARD_BITS, HRR_TRUNCATION_N, RATIO_BOUNDS_MIN_N
from logpart.partition_oracle import p_exact
from logpart.precision_core import (
    CertifiedReal,
    Comparison,
    LabeledComparison,
    certified_comparison,
    cr_div,
    cr_exp,
    cr_from_int,
    cr_mul,
    cr_pi,
    cr_pow,
    cr_sqrt,
    cr_sub,
    exact_comparison,
    mpf_to_fraction,
    precision_ladder,
)
from logpart.special_functions import L_nu, mu, zeta_7_4

logger = logging.getLogger(__name__)

_NU = Fraction(3, 2)


def _sign_of_a(n: int, k: int) -> int:
    if k == 1:
        return 1
    if k == 2:
        return -1 if n & 1 else 1
    raise ValueError(f"A_k(n) is only available for k in (1, 2), got k = {k}")


def _check_n(n: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")


def _series_prefactor(precision: int) -> CertifiedReal:
    """2π(π/12)^(3/2)."""
    pi = cr_pi(precision)
    return cr_mul(cr_mul(2, pi), cr_pow(cr_div(pi, 12), _NU))


def _mu_squared_over(n: int, divisor: int, precision: int) -> CertifiedReal:
    """μ(n)²/divisor = π²(24n − 1)/(36·divisor), without a square root."""
    return cr_mul(cr_pow(cr_pi(precision), 2), Fraction(24 * n - 1, 36 * divisor))


# ===================================================================
#  Summands
# ===================================================================


def f_k(n: int, k: int, precision: int) -> CertifiedReal:
    """2π(π/12)^(3/2)·A_k(n)·k^(−5/2)·L_{3/2}(μ(n)²/(4k²))."""
    _check_n(n)
    sign = _sign_of_a(n, k)
    series = L_nu(_NU, _mu_squared_over(n, 4 * k * k, precision), precision)
    value = cr_mul(_series_prefactor(precision), series)
    if k == 2:
        value = cr_div(value, cr_pow(cr_from_int(2, precision), Fraction(5, 2)))
    return value if sign > 0 else -value


def fk_closed(n: int, k: int, precision: int) -> CertifiedReal:
    """(√12/(24n−1))·A_k·k^(−1/2)·[(1 − k/μ)e^(μ/k) + (1 + k/μ)e^(−μ/k)]."""
    _check_n(n)
    sign = _sign_of_a(n, k)
    m = mu(n, precision)
    ratio = cr_div(k, m)
    scaled = cr_div(m, k)
    bracket = cr_mul(1 - ratio, cr_exp(scaled)) + cr_mul(1 + ratio, cr_exp(-scaled))
    lead = cr_div(cr_sqrt(cr_from_int(12, precision)), 24 * n - 1)
    if k == 2:
        lead = cr_div(lead, cr_sqrt(cr_from_int(2, precision)))
    value = cr_mul(lead, bracket)
    return value if sign > 0 else -value


def f1_closed(n: int, precision: int) -> CertifiedReal:
    return fk_closed(n, 1, precision)


def g_tail(n: int, precision: int) -> CertifiedReal:
    """g(n) = 4π(π/12)^(3/2)·ζ(7/4)·L_{3/2}(μ(n)²/36), bounding Σ_{k>=3} |f_k(n)|."""
    _check_n(n)
    series = L_nu(_NU, _mu_squared_over(n, 36, precision), precision)
    return cr_mul(cr_mul(cr_mul(2, _series_prefactor(precision)), zeta_7_4(precision)), series)


# ===================================================================
#  Lehmer remainder and the HRR enclosure of p(n)
# ===================================================================


def lehmer_bound(n: int, N: int, precision: int) -> CertifiedReal:
    """(π²N^(−2/3)/√3)·[(N/μ)³ sinh(μ/N) + 1/6 − (N/μ)²] bounding |R2(n, N)|."""
    _check_n(n)
    if N < 1:
        raise ValueError(f"truncation N must be >= 1, got {N}")
    m = mu(n, precision)
    ratio = cr_div(N, m)
    t = cr_div(m, N)
    sinh = cr_div(cr_exp(t) - cr_exp(-t), 2)
    bracket = cr_mul(cr_pow(ratio, 3), sinh) + Fraction(1, 6) - cr_pow(ratio, 2)
    prefactor = cr_div(
        cr_mul(cr_pow(cr_pi(precision), 2), cr_pow(cr_from_int(N, precision), Fraction(-2, 3))),
        cr_sqrt(cr_from_int(3, precision)),
    )
    return cr_mul(prefactor, bracket)


@dataclass(frozen=True)
class HrrInterval:
    """Two-term HRR sum with Lehmer's remainder bound: an enclosure of p(n)."""

    n: int
    truncation_N: int
    approx: CertifiedReal
    lehmer_radius: CertifiedReal

    def total_radius(self) -> Fraction:
        upper = libmp.mpf_add(self.lehmer_radius.upper(), self.approx.rad, 64, libmp.round_ceiling)
        return mpf_to_fraction(upper)

    def containment_margin(self, value: int) -> Fraction:
        """Total radius minus the distance from value to the midpoint."""
        return self.total_radius() - abs(value - mpf_to_fraction(self.approx.mid))

    def contains(self, value: int) -> bool:
        return self.containment_margin(value) >= 0

    @property
    def recovers_exactly(self) -> bool:
        """True when rounding the midpoint is guaranteed to give p(n)."""
        return self.total_radius() < Fraction(1, 2)


def hrr_interval(n: int, precision: int) -> HrrInterval:
    approx = fk_closed(n, 1, precision) + fk_closed(n, 2, precision)
    return HrrInterval(n, HRR_TRUNCATION_N, approx, lehmer_bound(n, HRR_TRUNCATION_N, precision))


def lehmer_check(n: int, precision: int | None = None) -> Comparison:
    """p(n) lies inside the two-term HRR enclosure; margin is the unused radius."""
    prec = precision_ladder(precision)[0]
    margin = hrr_interval(n, prec).containment_margin(p_exact(n))
    if margin < 0:
        logger.warning(f"p({n}) escapes the HRR enclosure at {prec} bits")
    return exact_comparison(margin, prec)


# ===================================================================
#  Term bundle and ratio bounds
# ===================================================================


@dataclass(frozen=True)
class TermBundle:
    n: int
    f1: CertifiedReal
    f2: CertifiedReal
    g_bound: CertifiedReal

    @property
    def dominant_gap(self) -> CertifiedReal:
        """f1 − |f2|."""
        return cr_sub(self.f1, abs(self.f2))

    @property
    def tail_gap(self) -> CertifiedReal:
        """f1 − |f2| − g."""
        return cr_sub(self.dominant_gap, self.g_bound)


@lru_cache(maxsize=8192)
def term_bundle(n: int, precision: int) -> TermBundle:
    wp = precision + GUARD_BITS
    return TermBundle(n, f_k(n, 1, wp), f_k(n, 2, wp), g_tail(n, wp))


def term_bundle_checks(n: int, ladder: Sequence[int] | None = None) -> list[LabeledComparison]:
    """f1 > 0 and f1 − |f2| > 0 for every n, plus f1 − |f2| − g > 0 from n = 50."""
    _check_n(n)
    checks = [
        LabeledComparison(
            "f1_positive", certified_comparison(0, lambda p: term_bundle(n, p).f1, ladder)
        ),
        LabeledComparison(
            "dominant_gap_positive",
            certified_comparison(0, lambda p: term_bundle(n, p).dominant_gap, ladder),
        ),
    ]
    if n >= RATIO_BOUNDS_MIN_N:
        checks.append(
            LabeledComparison(
                "tail_gap_positive",
                certified_comparison(0, lambda p: term_bundle(n, p).tail_gap, ladder),
            )
        )
    return checks


def _exp_mu_scaled(n: int, factor: Fraction, precision: int) -> CertifiedReal:
    return cr_exp(cr_mul(mu(n, precision), factor))


def smallness_bound(n: int, precision: int) -> CertifiedReal:
    """√2·e^(−μ/2) + 54ζ(7/4)e^(−2μ/3)."""
    root_two = cr_sqrt(cr_from_int(2, precision))
    first = cr_mul(root_two, _exp_mu_scaled(n, Fraction(-1, 2), precision))
    second = cr_mul(cr_mul(54, zeta_7_4(precision)), _exp_mu_scaled(n, Fraction(-2, 3), precision))
    return first + second


def ratio_bound_checks(n: int, ladder: Sequence[int] | None = None) -> list[LabeledComparison]:
    """The two-sided bounds on |f2|/f1, g/f1 and g/|f2|, and the n >= 50 smallness check."""
    _check_n(n)

    def f2_over_f1(p):
        b = term_bundle(n, p)
        return cr_div(abs(b.f2), b.f1)

    def g_over_f1(p):
        b = term_bundle(n, p)
        return cr_div(b.g_bound, b.f1)

    def g_over_f2(p):
        b = term_bundle(n, p)
        return cr_div(b.g_bound, abs(b.f2))

    def scaled(constant, factor: Fraction, with_zeta: bool = False):
        def evaluate(p):
            value = cr_mul(constant(p), _exp_mu_scaled(n, factor, p))
            return cr_mul(value, zeta_7_4(p)) if with_zeta else value

        return evaluate

    def two_pow(exponent: Fraction):
        return lambda p: cr_pow(cr_from_int(2, p), exponent)

    def times_sqrt2(c: int):
        return lambda p: cr_mul(c, cr_sqrt(cr_from_int(2, p)))

    half, two_thirds, sixth = Fraction(-1, 2), Fraction(-2, 3), Fraction(-1, 6)
    pairs = [
        ("f2_over_f1_lower", scaled(two_pow(Fraction(-5, 2)), half), f2_over_f1),
        ("f2_over_f1_upper", f2_over_f1, scaled(two_pow(Fraction(1, 2)), half)),
        ("g_over_f1_lower", scaled(lambda p: cr_from_int(2, p), two_thirds, True), g_over_f1),
        ("g_over_f1_upper", g_over_f1, scaled(lambda p: cr_from_int(54, p), two_thirds, True)),
        ("g_over_f2_lower", scaled(two_pow(Fraction(7, 2)), sixth, True), g_over_f2),
        ("g_over_f2_upper", g_over_f2, scaled(times_sqrt2(27), sixth, True)),
    ]
    checks = [
        LabeledComparison(label, certified_comparison(lhs, rhs, ladder))
        for label, lhs, rhs in pairs
    ]
    if n >= RATIO_BOUNDS_MIN_N:
        checks.append(
            LabeledComparison(
                "smallness", certified_comparison(lambda p: smallness_bound(n, p), 1, ladder)
            )
        )
    return checks
