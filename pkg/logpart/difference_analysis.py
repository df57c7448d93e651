"""Finite differences of log p(n) and the statements made about them.

The r-th difference D_r(n) = (−1)^(r−1)Δ^r log p(n) splits into H_r, the
difference of the closed form −3log μ + log(μ−1) + μ, and a remainder G_r
that the HRR terms f1, f2 and g bound. Around that sit the classical ratio
inequalities for p(n), the second-difference conjecture with the chain that
proves it from n = 5000 on, the upper bound on D_r with its threshold
constants, and the positivity of D_r with its own constants.

Every check returns a Comparison (margin = rhs − lhs); the verify_* wrappers
reduce it to a Verdict.
"""

from __future__ import annotations

import enum
import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, partial
from math import ceil, comb, factorial, floor

from mpmath import libmp

from constants import (
    BESSENRODT_ONO_MIN_SUM,
    GUARD_BITS,
    RATIO_BOUNDS_MIN_N,
    THEOREM31_ANALYTIC_MIN_N,
    THRESHOLD_PRECISION,
    THRESHOLD_SERIES_MIN_TERMS,
    THRESHOLD_SERIES_TERMS,
)
from logpart.hrr_terms import term_bundle
from logpart.partition_oracle import ensure_table, p_exact
from logpart.precision_core import (
    CertifiedReal,
    Comparison,
    DomainError,
    LabeledComparison,
    Verdict,
    certified_comparison,
    cr_div,
    cr_exp,
    cr_from_int,
    cr_from_interval,
    cr_from_rational,
    cr_log,
    cr_mul,
    cr_pi,
    cr_pow,
    cr_round,
    cr_sqrt,
    cr_sum,
    exact_comparison,
    log_p_certified,
    mpf_to_fraction,
    precision_ladder,
    weakest,
)
from logpart.special_functions import (
    LambertBranch,
    lambert_w,
    mu,
    rising_factorial,
)

logger = logging.getLogger(__name__)

_HALF = Fraction(1, 2)
_THREE_HALVES = Fraction(3, 2)


def _q(value: int | Fraction, precision: int) -> CertifiedReal:
    return cr_from_rational(value, precision)


def _check_order(n: int, r: int) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if r < 1:
        raise ValueError(f"difference order must be >= 1, got {r}")


def _signed_difference(values: Sequence[CertifiedReal]) -> CertifiedReal:
    """(−1)^(r−1)Δ^r f(n) from f(n), ..., f(n+r)."""
    r = len(values) - 1
    # (−1)^(r−1)(−1)^(r−k) = (−1)^(k+1)
    return cr_sum(
        [cr_mul((-1) ** (k + 1) * comb(r, k), value) for k, value in enumerate(values)],
        values[0].prec,
    )


def _first_rung(precision: int | None) -> int:
    return precision_ladder(precision)[0]


# ===================================================================
#  D_r(n) and its H_r / G_r split
# ===================================================================


@dataclass(frozen=True)
class DifferenceValue:
    """D_r(n) = (−1)^(r−1)Δ^r log p(n) = H_r + G_r."""

    n: int
    r: int
    value: CertifiedReal
    h_part: CertifiedReal
    g_part: CertifiedReal

    @property
    def residual(self) -> CertifiedReal:
        """value − (h_part + g_part); encloses zero."""
        return self.value - (self.h_part + self.g_part)


def log_difference(n: int, r: int, precision: int) -> CertifiedReal:
    """D_r(n) alone, from exact partition numbers."""
    _check_order(n, r)
    return _signed_difference([log_p_certified(n + k, precision) for k in range(r + 1)])


def _closed_form(m: int, precision: int) -> CertifiedReal:
    """−3log μ(m) + log(μ(m) − 1) + μ(m)."""
    x = mu(m, precision)
    return cr_mul(-3, cr_log(x)) + cr_log(x - 1) + x


def h_r(n: int, r: int, precision: int) -> CertifiedReal:
    """H_r(n) by exact binomial differencing of the closed form.

    The difference is taken directly, so no truncation of the 1/(kμ^k)
    expansion of log(μ − 1) is involved.
    """
    _check_order(n, r)
    wp = precision + GUARD_BITS
    return cr_round(_signed_difference([_closed_form(n + k, wp) for k in range(r + 1)]), precision)


def delta_r_log_p(n: int, r: int, precision: int) -> DifferenceValue:
    _check_order(n, r)
    wp = precision + GUARD_BITS
    value = log_difference(n, r, wp)
    h = h_r(n, r, wp)
    return DifferenceValue(
        n, r, cr_round(value, precision), cr_round(h, precision), cr_round(value - h, precision)
    )


def p2_of_n(n: int, precision: int) -> CertifiedReal:
    """p₂(n) = 2log p(n) − log p(n−1) − log p(n+1) = −Δ²log p(n−1)."""
    if n < 1:
        raise ValueError(f"p2(n) needs n >= 1, got {n}")
    twice = cr_mul(2, log_p_certified(n, precision))
    return twice - log_p_certified(n - 1, precision) - log_p_certified(n + 1, precision)


def logconcave_check(n: int, precision: int | None = None) -> Comparison:
    """p₂(n) > 0."""
    return certified_comparison(0, lambda p: p2_of_n(n, p), precision_ladder(precision))


# ===================================================================
#  Ratio inequalities for p(n)
# ===================================================================


def _neighbour_ratio(n: int) -> Fraction:
    """p(n)²/(p(n−1)p(n+1))."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return Fraction(p_exact(n) ** 2, p_exact(n - 1) * p_exact(n + 1))


def theorem_11_check(n: int, precision: int | None = None) -> Comparison:
    """(p(n−1)/p(n))(1 + 1/n) > p(n)/p(n+1), decided exactly."""
    margin = 1 + Fraction(1, n) - _neighbour_ratio(n)
    return exact_comparison(margin, _first_rung(precision))


def verify_theorem_11(n: int, precision: int | None = None) -> Verdict:
    return theorem_11_check(n, precision).verdict


def theorem_12_check(n: int, precision: int | None = None) -> Comparison:
    """(p(n−1)/p(n))(1 + 240/(24n)^(3/2)) > p(n)/p(n+1)."""
    ratio = _neighbour_ratio(n)

    def scaled(p):
        return 1 + cr_div(240, cr_pow(cr_from_int(24 * n, p), _THREE_HALVES))

    return certified_comparison(ratio, scaled, precision_ladder(precision))


def verify_theorem_12(n: int, precision: int | None = None) -> Verdict:
    return theorem_12_check(n, precision).verdict


def _dp_scale(n: int, precision: int) -> CertifiedReal:
    """24π/(24n)^(3/2), which equals π/(√24·n^(3/2))."""
    power = cr_pow(cr_from_int(24 * n, precision), _THREE_HALVES)
    return cr_div(cr_mul(24, cr_pi(precision)), power)


def dp_log_bound(n: int, precision: int) -> CertifiedReal:
    """log(1 + π/(√24·n^(3/2)))."""
    return cr_log(1 + _dp_scale(n, precision))


def conjecture_dp_check(n: int, precision: int | None = None) -> Comparison:
    """p₂(n) < log(1 + π/(√24·n^(3/2)))."""
    return certified_comparison(
        lambda p: p2_of_n(n, p), lambda p: dp_log_bound(n, p), precision_ladder(precision)
    )


def verify_conjecture_dp(n: int, precision: int | None = None) -> Verdict:
    return conjecture_dp_check(n, precision).verdict


def bessenrodt_ono_check(a: int, b: int, precision: int | None = None) -> Comparison:
    """p(a)p(b) > p(a+b), decided exactly."""
    if a <= 1 or b <= 1:
        raise ValueError(f"need a, b > 1, got a={a}, b={b}")
    margin = p_exact(a) * p_exact(b) - p_exact(a + b)
    return exact_comparison(margin, _first_rung(precision))


def verify_bessenrodt_ono(a: int, b: int) -> Verdict:
    return bessenrodt_ono_check(a, b).verdict


def bessenrodt_ono_sum_check(total: int, precision: int | None = None) -> Comparison:
    """Every split total = a + b with 1 < a <= b; the weakest split decides."""
    if total < 4:
        raise ValueError(f"a + b needs a, b > 1, so total must be >= 4, got {total}")
    return weakest(
        [bessenrodt_ono_check(a, total - a, precision) for a in range(2, total // 2 + 1)]
    )


def bessenrodt_ono_failures(max_sum: int) -> list[tuple[int, int]]:
    """Pairs 1 < a <= b with a + b <= max_sum and p(a)p(b) <= p(a+b)."""
    ensure_table(max_sum)
    failures = [
        (a, total - a)
        for total in range(4, max_sum + 1)
        for a in range(2, total // 2 + 1)
        if p_exact(a) * p_exact(total - a) <= p_exact(total)
    ]
    beyond = [pair for pair in failures if sum(pair) >= BESSENRODT_ONO_MIN_SUM]
    if beyond:
        logger.warning(f"Bessenrodt-Ono failures with a + b > 9: {beyond}")
    return failures


# ===================================================================
#  Second differences: the bound for n >= 50 and its chain
# ===================================================================


def _check_ratio_range(n: int) -> None:
    if n < RATIO_BOUNDS_MIN_N:
        raise ValueError(f"bound is stated for n >= {RATIO_BOUNDS_MIN_N}, got {n}")


def _exp_tail(n: int, precision: int) -> CertifiedReal:
    """2·exp(−(π/10)√(2n/3))."""
    exponent = cr_mul(cr_div(cr_pi(precision), -10), cr_sqrt(_q(Fraction(2 * n, 3), precision)))
    return cr_mul(2, cr_exp(exponent))


def desalvo_pak_upper(n: int, precision: int) -> CertifiedReal:
    """Four-term upper bound on p₂(n), valid for n >= 50."""
    _check_ratio_range(n)
    pi = cr_pi(precision)
    m = cr_from_int(24 * (n - 1) - 1, precision)
    m_three_halves = cr_pow(m, _THREE_HALVES)
    pi_root = cr_mul(pi, cr_sqrt(m))
    first = cr_div(cr_mul(24, pi), m_three_halves)
    second = cr_div(
        cr_mul(cr_mul(288, pi), pi_root - 3), cr_mul(m_three_halves, cr_pow(pi_root - 6, 2))
    )
    third = _q(Fraction(-864, (24 * (n + 1) - 1) ** 2), precision)
    return first + second + third + _exp_tail(n, precision)


def desalvo_pak_target(n: int, precision: int) -> CertifiedReal:
    """T − T² with T = 24π/(24n)^(3/2)."""
    t = _dp_scale(n, precision)
    return t - cr_pow(t, 2)


def _desalvo_pak_intermediate(n: int, precision: int) -> CertifiedReal:
    """T − T² − 1/n² + 3/n^(5/2) + 2e^(−(π/10)√(2n/3))."""
    correction = _q(Fraction(-1, n * n), precision) + cr_div(
        3, cr_pow(cr_from_int(n, precision), Fraction(5, 2))
    )
    return desalvo_pak_target(n, precision) + correction + _exp_tail(n, precision)


def verify_desalvo_pak_chain(n: int, precision: int | None = None) -> list[LabeledComparison]:
    """Links of the second-difference chain that apply at n.

    From n = 50: p₂ < bound < T − T² − 1/n² + 3/n^(5/2) + 2e^(...). From n = 5000
    also bound < T − T² < log(1 + T), with the direct p₂ comparisons.
    """
    _check_ratio_range(n)
    ladder = precision_ladder(precision)

    def p2(p):
        return p2_of_n(n, p)

    def upper(p):
        return desalvo_pak_upper(n, p)

    def target(p):
        return desalvo_pak_target(n, p)

    def log_bound(p):
        return dp_log_bound(n, p)

    links = [
        ("p2_below_bound", p2, upper),
        ("bound_below_intermediate", upper, lambda p: _desalvo_pak_intermediate(n, p)),
    ]
    if n >= 5000:
        links += [
            ("bound_below_target", upper, target),
            ("p2_below_target", p2, target),
            ("target_below_log", target, log_bound),
            ("bound_below_log", upper, log_bound),
        ]
    return [
        LabeledComparison(label, certified_comparison(lhs, rhs, ladder))
        for label, lhs, rhs in links
    ]


# ===================================================================
#  Derivatives of μ, log μ, μ^(−k) and the difference sandwich
# ===================================================================


class MuFamily(enum.Enum):
    MU = "mu"
    LOG_MU = "log_mu"
    INV_MU_K = "inv_mu_k"

    def __str__(self) -> str:
        return self.value


def mu_family_derivative(
    which: MuFamily | str, k: int, r: int, x: CertifiedReal | int | Fraction, precision: int
) -> CertifiedReal:
    """r-th derivative at x of μ, log μ or μ^(−k), in closed form.

    μ^(r)     = (−1)^(r−1)(1/2)_(r−1)·24^r·π / (12(24x−1)^(r−1/2))
    (log μ)^(r) = (−1)^(r−1)(r−1)!·24^r / (2(24x−1)^r)
    (μ^−k)^(r) = (6/π)^k(−24)^r(k/2)_r / (24x−1)^(k/2+r)
    """
    which = MuFamily(which)
    if r < 1:
        raise ValueError(f"derivative order must be >= 1, got {r}")
    if not isinstance(x, CertifiedReal):
        x = _q(Fraction(x), precision)
    radicand = cr_mul(x, 24) - 1
    if not radicand.is_positive():
        raise DomainError(f"derivatives need 24x - 1 > 0, got x = {x!r}")
    pi = cr_pi(precision)
    sign = 1 if r & 1 else -1

    if which is MuFamily.MU:
        numerator = cr_mul(pi, rising_factorial(_HALF, r - 1) * 24**r / 12)
        return cr_mul(sign, cr_div(numerator, cr_pow(radicand, Fraction(2 * r - 1, 2))))
    if which is MuFamily.LOG_MU:
        value = cr_div(Fraction(factorial(r - 1) * 24**r, 2), cr_pow(radicand, r))
        return cr_mul(sign, value)
    if k < 1:
        raise ValueError(f"inv_mu_k needs k >= 1, got {k}")
    coefficient = rising_factorial(Fraction(k, 2), r) * (-24) ** r
    scale = cr_pow(cr_div(6, pi), k)
    return cr_div(cr_mul(scale, coefficient), cr_pow(radicand, Fraction(k + 2 * r, 2)))


def _family_value(family: MuFamily, k: int, m: int, precision: int) -> CertifiedReal:
    x = mu(m, precision)
    if family is MuFamily.MU:
        return x
    if family is MuFamily.LOG_MU:
        return cr_log(x)
    return -cr_pow(x, -k)


def sandwich_check(
    family: MuFamily | str, k: int, r: int, n: int, precision: int | None = None
) -> list[LabeledComparison]:
    """(−1)^(r−1)f^(r)(n+r) <= (−1)^(r−1)Δ^r f(n) <= (−1)^(r−1)f^(r)(n).

    f is μ, log μ, or −μ^(−k) for the inv_mu_k family.
    """
    family = MuFamily(family)
    _check_order(n, r)
    ladder = precision_ladder(precision)
    orientation = (1 if r & 1 else -1) * (-1 if family is MuFamily.INV_MU_K else 1)

    def difference(p):
        return _signed_difference([_family_value(family, k, n + j, p) for j in range(r + 1)])

    def derivative_at(point: int):
        return lambda p: cr_mul(orientation, mu_family_derivative(family, k, r, point, p))

    return [
        LabeledComparison(
            "difference_above_derivative_at_n_plus_r",
            certified_comparison(derivative_at(n + r), difference, ladder, strict=False),
        ),
        LabeledComparison(
            "difference_below_derivative_at_n",
            certified_comparison(difference, derivative_at(n), ladder, strict=False),
        ),
    ]


# ===================================================================
#  Bounds on G_r
# ===================================================================


@dataclass(frozen=True)
class GBoundBreakdown:
    """Bounds on the three parts of G_r, and F4 = 2^r|f2|/f1 which dominates them."""

    n: int
    r: int
    bound_F1: CertifiedReal
    bound_F2: CertifiedReal
    bound_F3: CertifiedReal
    F4: CertifiedReal

    @property
    def total(self) -> CertifiedReal:
        return self.bound_F1 + self.bound_F2 + self.bound_F3


def g_bound_breakdown(n: int, r: int, precision: int) -> GBoundBreakdown:
    _check_ratio_range(n)
    _check_order(n, r)
    bundle = term_bundle(n, precision)
    x = mu(n, precision + GUARD_BITS)
    two_r = 2**r
    f2 = abs(bundle.f2)
    bound_f1 = cr_mul(two_r, cr_mul(cr_div(x + 1, x - 1), cr_exp(cr_mul(-2, x))))
    bound_f2 = cr_mul(two_r, cr_div(f2, bundle.dominant_gap))
    bound_f3 = cr_mul(two_r, cr_div(bundle.g_bound, bundle.tail_gap))
    f4 = cr_mul(two_r, cr_div(f2, bundle.f1))
    return GBoundBreakdown(
        n,
        r,
        cr_round(bound_f1, precision),
        cr_round(bound_f2, precision),
        cr_round(bound_f3, precision),
        cr_round(f4, precision),
    )


def g_envelope(n: int, r: int, precision: int) -> CertifiedReal:
    """2^(r+1/2)·e^(−μ(n)/2)."""
    power = cr_pow(cr_from_int(2, precision), Fraction(2 * r + 1, 2))
    return cr_mul(power, cr_exp(cr_mul(mu(n, precision), -_HALF)))


def g_bound_checks(n: int, r: int, precision: int | None = None) -> list[LabeledComparison]:
    """|F1| + |F2| + |F3| < 5F4, F4 < 2^(r+1/2)e^(−μ/2), and |G_r| < 5·2^(r+1/2)e^(−μ/2)."""
    _check_ratio_range(n)
    ladder = precision_ladder(precision)

    def envelope(factor: int):
        return lambda p: cr_mul(factor, g_envelope(n, r, p))

    return [
        LabeledComparison(
            "breakdown_below_5F4",
            certified_comparison(
                lambda p: g_bound_breakdown(n, r, p).total,
                lambda p: cr_mul(5, g_bound_breakdown(n, r, p).F4),
                ladder,
            ),
        ),
        LabeledComparison(
            "F4_below_envelope",
            certified_comparison(lambda p: g_bound_breakdown(n, r, p).F4, envelope(1), ladder),
        ),
        LabeledComparison(
            "g_part_below_envelope",
            certified_comparison(
                lambda p: abs(delta_r_log_p(n, r, p).g_part), envelope(5), ladder
            ),
        ),
    ]


# ===================================================================
#  Upper bound on D_r
# ===================================================================


def _leading_term(n: int, r: int, precision: int) -> CertifiedReal:
    """y = (√6π/6)(1/2)_(r−1)/(n+1)^(r−1/2)."""
    pi = cr_pi(precision)
    scale = cr_mul(cr_div(cr_sqrt(cr_from_int(6, precision)), 6), pi)
    power = cr_pow(cr_from_int(n + 1, precision), Fraction(2 * r - 1, 2))
    return cr_div(cr_mul(scale, rising_factorial(_HALF, r - 1)), power)


def u_r_bound(n: int, r: int, precision: int) -> CertifiedReal:
    """log(1 + (√6π/6)(1/2)_(r−1)/(n+1)^(r−1/2))."""
    _check_order(n, r)
    return cr_log(1 + _leading_term(n, r, precision))


def theorem_31_check(n: int, r: int, precision: int | None = None) -> Comparison:
    """D_r(n) < log(1 + (√6π/6)(1/2)_(r−1)/(n+1)^(r−1/2))."""
    _check_order(n, r)
    return certified_comparison(
        lambda p: log_difference(n, r, p),
        lambda p: u_r_bound(n, r, p),
        precision_ladder(precision),
    )


def verify_theorem_31(n: int, r: int, precision: int | None = None) -> Verdict:
    return theorem_31_check(n, r, precision).verdict


def theorem_31_chain(n: int, r: int, precision: int | None = None) -> list[LabeledComparison]:
    """0 < D_r(n) < log(1 + ...), both sides certified."""
    return [
        LabeledComparison("positive", theorem_41_check(n, r, precision)),
        LabeledComparison("below_bound", theorem_31_check(n, r, precision)),
    ]


def theorem_31_r1_chain_check(n: int, precision: int | None = None) -> Comparison:
    """Δ log p(n) < √6π/(6√(n+1)) − π²/(12(n+1)), for n >= 200."""
    if n < THEOREM31_ANALYTIC_MIN_N:
        raise ValueError(f"chain is stated for n >= {THEOREM31_ANALYTIC_MIN_N}, got {n}")

    def bound(p):
        pi = cr_pi(p)
        return _leading_term(n, 1, p) - cr_div(cr_pow(pi, 2), 12 * (n + 1))

    return certified_comparison(
        lambda p: log_difference(n, 1, p), bound, precision_ladder(precision)
    )


def verify_theorem_31_r1_chain(n: int, precision: int | None = None) -> Verdict:
    return theorem_31_r1_chain_check(n, precision).verdict


# ===================================================================
#  Threshold constants
# ===================================================================


class ThresholdFamily(enum.Enum):
    THEOREM31 = "thm31"
    THEOREM41 = "thm41"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ThresholdConstants:
    """Constants behind n(r): a1..a3, u1, u2 (thm31) or b1..b3, m1, m2 (thm41)."""

    r: int
    family: ThresholdFamily
    c1: CertifiedReal
    c2: CertifiedReal
    c3: CertifiedReal
    u_or_m_1: CertifiedReal
    u_or_m_2: CertifiedReal
    n_of_r: int
    lambert_argument: CertifiedReal
    printed_lambert_argument: CertifiedReal
    roots_validated: bool

    @property
    def printed_argument_in_domain(self) -> bool:
        return lambert_argument_in_domain(self.printed_lambert_argument)


def lambert_argument_in_domain(z: CertifiedReal) -> bool:
    """−1/e < z < 0, certified."""
    inv_e = cr_exp(cr_from_int(-1, z.prec + GUARD_BITS))
    return z.is_negative() and (z + inv_e).is_positive()


def _ceil_upper(value: CertifiedReal) -> int:
    return ceil(mpf_to_fraction(value.upper()))


def _series_with_tail(terms: list[CertifiedReal], ratio: CertifiedReal) -> CertifiedReal:
    """Partial sum plus [0, t_K·q/(1−q)] for a tail whose term ratio is at most q < 1/2."""
    if not libmp.mpf_lt(ratio.upper(), libmp.from_man_exp(1, -1)):
        raise ValueError(f"series term ratio {ratio!r} is not certified below 1/2")
    prec = terms[-1].prec
    wp = prec + GUARD_BITS
    q_hi = ratio.upper()
    tail_hi = libmp.mpf_div(
        libmp.mpf_mul(terms[-1].upper(), q_hi, wp, libmp.round_ceiling),
        libmp.mpf_sub(libmp.fone, q_hi, wp, libmp.round_floor),
        wp,
        libmp.round_ceiling,
    )
    return cr_sum(terms, prec) + cr_from_interval(libmp.fzero, tail_hi, prec)


@lru_cache(maxsize=256)
def _upper_coefficients(r: int, k_max: int, precision: int) -> tuple[CertifiedReal, ...]:
    """a1, a2, a3."""
    pi = cr_pi(precision)
    half_r1 = rising_factorial(_HALF, r - 1)
    width = 48 * r - 2
    root_width = cr_sqrt(cr_from_int(width, precision))

    lead = cr_mul(cr_pow(_q(Fraction(48, 47), precision), Fraction(2 * r + 1, 2)), pi)
    a1 = cr_div(cr_mul(lead, half_r1 * (2 * r - 1) * 25), cr_pow(_q(24, precision), _THREE_HALVES))
    a1 = a1 + cr_div(
        cr_mul(cr_pow(pi, 2), half_r1 * half_r1 / 6),
        cr_pow(cr_from_int(width, precision), Fraction(2 * r - 3, 2)),
    )

    # a2 terms: √w·((k/2)_r/k)·σ^k with σ = √(3/(2w))/π
    sigma = cr_div(cr_sqrt(_q(Fraction(3, 2 * width), precision)), pi)
    # a3 terms: (48/47)^(r+1)/√w·((k/2)_(r+1)(r+k/2)·25/(24k))·τ^k with τ = σ√(48/47)
    tau = cr_mul(sigma, cr_sqrt(_q(Fraction(48, 47), precision)))
    a3_scale = cr_div(cr_pow(_q(Fraction(48, 47), precision), r + 1), root_width)

    a2_terms, a3_terms = [], []
    sigma_k, tau_k = sigma, tau
    for k in range(1, k_max + 1):
        half_k = Fraction(k, 2)
        a2_coefficient = rising_factorial(half_k, r) / k
        a3_coefficient = rising_factorial(half_k, r + 1) * (r + half_k) * Fraction(25, 24 * k)
        a2_terms.append(cr_mul(root_width, cr_mul(sigma_k, a2_coefficient)))
        a3_terms.append(cr_mul(a3_scale, cr_mul(tau_k, a3_coefficient)))
        sigma_k, tau_k = cr_mul(sigma_k, sigma), cr_mul(tau_k, tau)

    growth = 1 + Fraction(1, k_max)
    a2_ratio = cr_mul(sigma, growth**r)
    a3_ratio = cr_mul(tau, growth ** (r + 1) * (1 + Fraction(1, 2 * r + k_max)))
    return a1, _series_with_tail(a2_terms, a2_ratio), _series_with_tail(a3_terms, a3_ratio)


@lru_cache(maxsize=256)
def _lower_coefficients(r: int, precision: int) -> tuple[CertifiedReal, ...]:
    """b1, b2, b3."""
    pi = cr_pi(precision)
    b1 = cr_mul(
        cr_div(cr_mul(cr_sqrt(cr_from_int(6, precision)), pi), 6), rising_factorial(_HALF, r - 1)
    )
    b2 = cr_div(
        cr_mul(cr_mul(pi, cr_sqrt(cr_from_int(48 * r - 2, precision))), rising_factorial(_HALF, r)),
        cr_pow(_q(24, precision), _THREE_HALVES),
    )
    b3 = factorial(r - 1) * (1 + Fraction(r, 24 * (48 * r - 2)) * Fraction(48, 47) ** (r + 1))
    return b1, b2, _q(b3, precision)


def _exp_envelope(x: int, r: int, precision: int) -> CertifiedReal:
    """5·2^(r+1/2)·e^(−μ(x)/2)."""
    return cr_mul(5, g_envelope(x, r, precision))


def _theorem31_equation(x: int, r: int, precision: int) -> CertifiedReal:
    """(23/48)^r(r−1)!/(2(x−1/24)^r) − 5·2^(r+1/2)e^(−μ(x)/2)."""
    left = Fraction(23, 48) ** r * factorial(r - 1) / (2 * (x - Fraction(1, 24)) ** r)
    return _q(left, precision) - _exp_envelope(x, r, precision)


def _theorem41_equation(x: int, r: int, precision: int) -> CertifiedReal:
    """(23/24)^(r−1/2)·b1/(2(x−1/24)^(r−1/2)) − 5·2^(r+1/2)e^(−μ(x)/2)."""
    b1 = _lower_coefficients(r, precision)[0]
    exponent = Fraction(2 * r - 1, 2)
    ratio = _q(Fraction(23, 24) / (x - Fraction(1, 24)), precision)
    return cr_div(cr_mul(cr_pow(ratio, exponent), b1), 2) - _exp_envelope(x, r, precision)


def _theorem31_argument(r: int, precision: int, *, printed: bool = False) -> CertifiedReal:
    """−(π√23/(48r))((r−1)!/(10√2))^(1/(2r)); the printed variant carries √46."""
    pi = cr_pi(precision)
    base = cr_div(factorial(r - 1), cr_mul(10, cr_sqrt(cr_from_int(2, precision))))
    root = cr_pow(base, Fraction(1, 2 * r))
    radicand = 46 if printed else 23
    scale = cr_div(cr_mul(pi, cr_sqrt(cr_from_int(radicand, precision))), 48 * r)
    return -cr_mul(scale, root)


def _theorem41_argument(r: int, precision: int) -> CertifiedReal:
    """−(√46π/(24(2r−1)))(π(1/2)_(r−1)/(20√6))^(1/(2r−1))."""
    pi = cr_pi(precision)
    inner = cr_div(
        cr_mul(pi, rising_factorial(_HALF, r - 1)),
        cr_mul(20, cr_sqrt(cr_from_int(6, precision))),
    )
    root = cr_pow(inner, Fraction(1, 2 * r - 1))
    scale = cr_div(cr_mul(pi, cr_sqrt(cr_from_int(46, precision))), 24 * (2 * r - 1))
    return -cr_mul(scale, root)


def _crossing_validated(equation: Callable[[int], CertifiedReal], root: CertifiedReal) -> bool:
    """The equation is negative at ⌊root⌋ and positive at ⌈root⌉ + 1."""
    below = max(1, floor(mpf_to_fraction(root.lower())))
    above = _ceil_upper(root) + 1
    return equation(below).is_negative() and equation(above).is_positive()


@lru_cache(maxsize=64)
def threshold_constants(
    r: int,
    family: ThresholdFamily | str,
    k_max: int = THRESHOLD_SERIES_TERMS,
    precision: int = THRESHOLD_PRECISION,
) -> ThresholdConstants:
    """Certified constants and the integer threshold n(r) for one family.

    The second constant is the larger root of its defining equation, taken
    from the W_−1 branch and confirmed by a sign change of that equation.
    """
    family = ThresholdFamily(family)
    if k_max < THRESHOLD_SERIES_MIN_TERMS:
        raise ValueError(f"K_max must be >= {THRESHOLD_SERIES_MIN_TERMS}, got {k_max}")
    wp = precision + GUARD_BITS
    pi_squared = cr_pow(cr_pi(wp), 2)

    if family is ThresholdFamily.THEOREM31:
        if r < 2:
            raise ValueError(f"thm31 constants need r >= 2, got {r}")
        c1, c2, c3 = _upper_coefficients(r, k_max, wp)
        first = cr_div(cr_mul(4, cr_pow(c1 + c2 + c3, 2)), factorial(r - 1) ** 2)
        argument = _theorem31_argument(r, wp)
        printed = _theorem31_argument(r, wp, printed=True)
        factor = 24 * r * r
        equation = partial(_theorem31_equation, r=r, precision=wp)
        floor_n = 48 * r - 3
    else:
        if r < 1:
            raise ValueError(f"thm41 constants need r >= 1, got {r}")
        c1, c2, c3 = _lower_coefficients(r, wp)
        first = cr_div(cr_mul(4, cr_pow(c2 + c3, 2)), cr_pow(c1, 2))
        argument = printed = _theorem41_argument(r, wp)
        factor = 6 * (2 * r - 1) ** 2
        equation = partial(_theorem41_equation, r=r, precision=wp)
        floor_n = 48 * r - 2

    if not lambert_argument_in_domain(argument):
        raise ValueError(f"{family} r={r}: Lambert argument {argument!r} is outside (-1/e, 0)")
    w = lambert_w(LambertBranch.MINUS_ONE, argument, wp).value
    second = _q(Fraction(1, 24), wp) + cr_div(cr_mul(factor, cr_pow(w, 2)), pi_squared)

    validated = _crossing_validated(equation, second)
    if not validated:
        logger.warning(f"{family} r={r}: no certified sign change around {second!r}")
    n_of_r = max(RATIO_BOUNDS_MIN_N, floor_n, _ceil_upper(first) + 1, _ceil_upper(second) + 1)
    logger.info(f"Threshold {family} r={r}: n(r) = {n_of_r} (second root {second.mid_str(8)})")

    def out(value: CertifiedReal) -> CertifiedReal:
        return cr_round(value, precision)

    return ThresholdConstants(
        r,
        family,
        out(c1),
        out(c2),
        out(c3),
        out(first),
        out(second),
        n_of_r,
        out(argument),
        out(printed),
        validated,
    )


# ===================================================================
#  Two-sided bounds on H_r
# ===================================================================


def h_r_upper_bound(
    n: int, r: int, precision: int, k_max: int = THRESHOLD_SERIES_TERMS
) -> CertifiedReal:
    """U_r − (r−1)!/(n+1)^r + (a1+a2+a3)/(n+1)^(r+1/2), with U_r = y(1 − y)."""
    if r < 2 or n < 48 * r - 3:
        raise ValueError(f"upper bound needs r >= 2 and n >= 48r - 3, got n={n}, r={r}")
    y = _leading_term(n, r, precision)
    a_sum = cr_sum(_upper_coefficients(r, k_max, precision), precision)
    correction = cr_div(a_sum, cr_pow(cr_from_int(n + 1, precision), Fraction(2 * r + 1, 2)))
    return cr_mul(y, 1 - y) - Fraction(factorial(r - 1), (n + 1) ** r) + correction


def h_r_lower_bound(n: int, r: int, precision: int) -> CertifiedReal:
    """b1/n^(r−1/2) − (b2+b3)/n^r."""
    if r < 1 or n < 48 * r - 2:
        raise ValueError(f"lower bound needs n >= 48r - 2, got n={n}, r={r}")
    b1, b2, b3 = _lower_coefficients(r, precision)
    lead = cr_div(b1, cr_pow(cr_from_int(n, precision), Fraction(2 * r - 1, 2)))
    return lead - cr_div(b2 + b3, n**r)


def verify_h_r_bounds(n: int, r: int, precision: int | None = None) -> list[LabeledComparison]:
    """Whichever of the H_r bounds apply at (n, r)."""
    _check_order(n, r)
    ladder = precision_ladder(precision)

    def h(p):
        return h_r(n, r, p)

    checks = []
    if r >= 2 and n >= 48 * r - 3:
        checks.append(
            LabeledComparison(
                "h_below_upper_bound",
                certified_comparison(h, lambda p: h_r_upper_bound(n, r, p), ladder),
            )
        )
    if n >= 48 * r - 2:
        checks.append(
            LabeledComparison(
                "h_above_lower_bound",
                certified_comparison(lambda p: h_r_lower_bound(n, r, p), h, ladder),
            )
        )
        m1 = threshold_constants(r, ThresholdFamily.THEOREM41).u_or_m_1
        if n >= _ceil_upper(m1) + 1:

            def half_lead(p):
                b1 = _lower_coefficients(r, p)[0]
                return cr_div(b1, cr_mul(2, cr_pow(cr_from_int(n, p), Fraction(2 * r - 1, 2))))

            checks.append(
                LabeledComparison(
                    "h_above_half_leading", certified_comparison(half_lead, h, ladder)
                )
            )
    if not checks:
        raise ValueError(f"no H_r bound is stated at n={n}, r={r}")
    return checks


# ===================================================================
#  Positivity of D_r
# ===================================================================


def theorem_41_check(n: int, r: int, precision: int | None = None) -> Comparison:
    """D_r(n) > 0."""
    _check_order(n, r)
    return certified_comparison(0, lambda p: log_difference(n, r, p), precision_ladder(precision))


def verify_theorem_41(n: int, r: int, precision: int | None = None) -> Verdict:
    return theorem_41_check(n, r, precision).verdict


def log_difference_positive(n: int, r: int) -> bool:
    """D_r(n) > 0, decided on exact integers.

    D_r(n) = Σ(−1)^(k+1)C(r,k)log p(n+k), so positivity means the product of
    p(n+k)^C(r,k) over odd k exceeds the product over even k.
    """
    _check_order(n, r)
    odd, even = 1, 1
    for k in range(r + 1):
        power = p_exact(n + k) ** comb(r, k)
        if k & 1:
            odd *= power
        else:
            even *= power
    return odd > even


def empirical_sign_threshold_logp(r: int, n_max: int) -> int | None:
    """Smallest n0 with D_r(n) > 0 for all n0 <= n <= n_max, or None.

    Nothing beyond n_max is claimed.
    """
    if r < 1:
        raise ValueError(f"difference order must be >= 1, got {r}")
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    ensure_table(n_max + r)
    threshold = None
    for n in range(n_max, 0, -1):
        if not log_difference_positive(n, r):
            break
        threshold = n
    logger.info(f"Sign threshold of D_{r}: {threshold} (certified only up to n = {n_max})")
    return threshold
