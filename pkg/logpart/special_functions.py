"""Special functions behind the partition estimates.

μ(n), the L_ν series and its Bessel connection, ζ(7/4), rising factorials and
the two real branches of the Lambert W function, all returned as certified
balls. The roots of g(x) = −2/(3x²) + 2exp(−(π/10)√(2x/3)) are obtained from
Lambert W and cross-checked by a sign change of g.
"""

from __future__ import annotations

import enum
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath import MPContext, libmp

from constants import (
    GUARD_BITS,
    L_SERIES_MAX_TERMS,
    LAMBERT_MAX_WIDENINGS,
    LAMBERT_NEWTON_MAX_STEPS,
    ZETA_PARTIAL_TERMS,
)
from logpart.precision_core import (
    CertifiedReal,
    Comparison,
    DomainError,
    certified_comparison,
    cr_div,
    cr_exp,
    cr_from_int,
    cr_from_interval,
    cr_from_rational,
    cr_gamma,
    cr_mul,
    cr_pi,
    cr_pow,
    cr_sqrt,
    cr_sub,
)

logger = logging.getLogger(__name__)

_FLOOR = libmp.round_floor
_CEIL = libmp.round_ceiling
_HALF = libmp.from_man_exp(1, -1)


def _as_ball(value: CertifiedReal | int | Fraction, precision: int) -> CertifiedReal:
    if isinstance(value, CertifiedReal):
        return value
    return cr_from_rational(Fraction(value), precision)


def _rational_interval(q: Fraction, wp: int) -> tuple[tuple, tuple]:
    return (
        libmp.from_rational(q.numerator, q.denominator, wp, _FLOOR),
        libmp.from_rational(q.numerator, q.denominator, wp, _CEIL),
    )


# ===================================================================
#  μ(n) = (π/6)√(24n − 1)
# ===================================================================


@dataclass(frozen=True)
class MuValue:
    n: int
    mu: CertifiedReal


def mu_at(x: CertifiedReal | int | Fraction, precision: int) -> CertifiedReal:
    """μ evaluated at a real ball x with 24x > 1."""
    x = _as_ball(x, precision)
    radicand = cr_sub(cr_mul(x, 24), 1)
    if not radicand.is_positive():
        raise DomainError(f"μ(x) needs 24x - 1 > 0, got x = {x!r}")
    return cr_mul(cr_div(cr_pi(precision), 6), cr_sqrt(radicand))


@lru_cache(maxsize=16384)
def mu(n: int, precision: int) -> CertifiedReal:
    if n < 1:
        raise ValueError(f"μ(n) needs n >= 1, got {n}")
    return mu_at(n, precision)


def mu_value(n: int, precision: int) -> MuValue:
    return MuValue(n, mu(n, precision))


# ===================================================================
#  Series
# ===================================================================


def rising_factorial(a: int | Fraction, k: int) -> Fraction:
    """(a)_k = a(a+1)...(a+k-1), with (a)_0 = 1."""
    if k < 0:
        raise ValueError(f"rising factorial needs k >= 0, got {k}")
    a = Fraction(a)
    result = Fraction(1)
    for i in range(k):
        result *= a + i
    return result


def L_nu(
    nu: int | Fraction, x: CertifiedReal | int | Fraction, precision: int
) -> CertifiedReal:
    """Σ_m x^m / (m! Γ(m+ν+1)) with a certified geometric tail.

    Terms are carried as intervals over the whole input ball. Summation stops
    once the next term ratio is below 1/2 and the next term is below the
    working precision of the partial sum; the remaining tail is then at most
    twice the next term.
    """
    nu = Fraction(nu)
    if nu < Fraction(1, 2):
        raise ValueError(f"L_nu needs nu >= 1/2, got {nu}")
    x = _as_ball(x, precision)
    if not x.is_positive():
        raise DomainError(f"L_nu needs x > 0, got {x!r}")

    wp = precision + GUARD_BITS
    x_iv = (x.lower(), x.upper())
    gamma = cr_gamma(cr_from_rational(nu + 1, wp))
    term = libmp.mpi_div((libmp.fone, libmp.fone), (gamma.lower(), gamma.upper()), wp)
    total = term
    m = 0
    while True:
        step = libmp.mpi_div(x_iv, _rational_interval((m + 1) * (m + 1 + nu), wp), wp)
        term = libmp.mpi_mul(term, step, wp)
        if libmp.mpf_lt(step[1], _HALF) and libmp.mpf_le(term[1], libmp.mpf_shift(total[0], -wp)):
            break
        total = libmp.mpi_add(total, term, wp)
        m += 1
        if m > L_SERIES_MAX_TERMS:
            raise RuntimeError(f"L_{nu} series did not settle within {L_SERIES_MAX_TERMS} terms")
    upper = libmp.mpf_add(total[1], libmp.mpf_shift(term[1], 1), wp, _CEIL)
    logger.debug(f"L_{nu} summed {m + 1} terms at {wp} bits")
    return cr_from_interval(total[0], upper, precision)


def I_nu_from_L(
    nu: int | Fraction, x: CertifiedReal | int | Fraction, precision: int
) -> CertifiedReal:
    """x^(ν/2) L_ν(x), which is I_ν(2√x)."""
    nu = Fraction(nu)
    x = _as_ball(x, precision)
    return cr_mul(cr_pow(x, nu / 2), L_nu(nu, x, precision))


def _quarter_power_three(k: int, wp: int) -> tuple[tuple, tuple]:
    """Enclosure of k^(3/4) as sqrt(sqrt(k^3))."""
    cube = libmp.from_int(k**3)
    lo = libmp.mpf_sqrt(libmp.mpf_sqrt(cube, wp, _FLOOR), wp, _FLOOR)
    hi = libmp.mpf_sqrt(libmp.mpf_sqrt(cube, wp, _CEIL), wp, _CEIL)
    return lo, hi


@lru_cache(maxsize=64)
def zeta_7_4(precision: int, terms: int = ZETA_PARTIAL_TERMS) -> CertifiedReal:
    """ζ(7/4) from Σ_{k<=K} k^(-7/4) plus the integral tail bounds."""
    if terms < 1:
        raise ValueError(f"zeta_7_4 needs at least one term, got {terms}")
    wp = precision + GUARD_BITS + terms.bit_length()
    lo = hi = libmp.fzero
    for k in range(1, terms + 1):
        root_lo, root_hi = _quarter_power_three(k, wp)
        kk = libmp.from_int(k)
        term_lo = libmp.mpf_div(libmp.fone, libmp.mpf_mul(kk, root_hi, wp, _CEIL), wp, _FLOOR)
        term_hi = libmp.mpf_div(libmp.fone, libmp.mpf_mul(kk, root_lo, wp, _FLOOR), wp, _CEIL)
        lo = libmp.mpf_add(lo, term_lo, wp, _FLOOR)
        hi = libmp.mpf_add(hi, term_hi, wp, _CEIL)

    # ∫_{K+1}^∞ t^(-7/4) dt <= tail <= ∫_K^∞ t^(-7/4) dt
    four_thirds_lo, four_thirds_hi = _rational_interval(Fraction(4, 3), wp)
    _, next_hi = _quarter_power_three(terms + 1, wp)
    last_lo, _ = _quarter_power_three(terms, wp)
    tail_lo = libmp.mpf_div(four_thirds_lo, next_hi, wp, _FLOOR)
    tail_hi = libmp.mpf_div(four_thirds_hi, last_lo, wp, _CEIL)
    lo = libmp.mpf_add(lo, tail_lo, wp, _FLOOR)
    hi = libmp.mpf_add(hi, tail_hi, wp, _CEIL)
    logger.debug(f"ζ(7/4) enclosed with K = {terms} at {wp} bits")
    return cr_from_interval(lo, hi, precision)


# ===================================================================
#  Lambert W
# ===================================================================


class LambertBranch(enum.Enum):
    PRINCIPAL = "principal"
    MINUS_ONE = "minus_one"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class LambertWResult:
    branch: LambertBranch
    argument: CertifiedReal
    value: CertifiedReal

    def residual(self) -> CertifiedReal:
        """value·e^value − argument; contains 0 for a correct enclosure."""
        return cr_sub(cr_mul(self.value, cr_exp(self.value)), self.argument)


def _newton_estimate(branch: LambertBranch, z_mid: tuple, wp: int) -> tuple:
    """Safe Newton on w·e^w − z inside a bracket around the branch value."""
    ctx = MPContext()
    ctx.prec = wp
    z = ctx.make_mpf(z_mid)
    one = ctx.mpf(1)

    ez1 = ctx.e * z + 1
    if ez1 <= 0:
        return libmp.fnone

    if branch is LambertBranch.PRINCIPAL:
        xl, xh = -one, max(one, z)
        if ez1 < ctx.mpf(0.25):
            p = ctx.sqrt(2 * ez1)
            seed = -1 + p - p * p / 3
        elif z < ctx.e:
            seed = ctx.log(1 + z)
        else:
            log_z = ctx.log(z)
            seed = log_z - ctx.log(log_z)
    else:
        log_mz = ctx.log(-z)
        # f(w) = w·e^w − z is decreasing on (−∞, −1]: f(−1) <= 0 <= f(2·log(−z) − 1)
        xl, xh = -one, 2 * log_mz - 1
        if ez1 < ctx.mpf(0.25):
            p = -ctx.sqrt(2 * ez1)
            seed = -1 + p - p * p / 3
        else:
            seed = log_mz - ctx.log(-log_mz)

    lo_end, hi_end = min(xl, xh), max(xl, xh)
    rts = min(max(seed, lo_end), hi_end)
    tol = ctx.ldexp(max(one, abs(rts)), 8 - wp)
    dxold = dx = hi_end - lo_end

    def evaluate(w):
        ew = ctx.exp(w)
        return w * ew - z, ew * (w + 1)

    f, df = evaluate(rts)
    for step in range(LAMBERT_NEWTON_MAX_STEPS):
        if ((rts - xh) * df - f) * ((rts - xl) * df - f) > 0 or abs(2 * f) > abs(dxold * df):
            dxold = dx
            dx = (xh - xl) / 2
            rts = xl + dx
            if xl == rts:
                break
        else:
            dxold = dx
            dx = f / df
            previous = rts
            rts = rts - dx
            if previous == rts:
                break
        if abs(dx) < tol:
            break
        f, df = evaluate(rts)
        if f < 0:
            xl = rts
        else:
            xh = rts
    else:
        logger.warning(f"Lambert W Newton hit {LAMBERT_NEWTON_MAX_STEPS} steps; certifying anyway")
    logger.debug(f"Lambert W {branch} estimate after {step + 1} steps")
    return rts._mpf_


def _phi(point: tuple, wp: int) -> CertifiedReal:
    w = CertifiedReal(point, libmp.fzero, wp)
    return cr_mul(w, cr_exp(w))


def _certify_enclosure(
    branch: LambertBranch, z: CertifiedReal, estimate: tuple, precision: int
) -> CertifiedReal:
    """Grow [w − δ, w + δ] until w·e^w − z changes sign across it for every z in the ball.

    W0 is increasing in z and W−1 decreasing, so the endpoint tests compare
    φ(endpoint) with the far end of the argument ball. Endpoints that reach
    the branch point are clipped to −1, where no test is needed.
    """
    wp = precision + GUARD_BITS
    minus_one = libmp.fnone
    z_lo, z_hi = z.lower(), z.upper()
    scale = libmp.mpf_abs(estimate)
    if libmp.mpf_lt(scale, libmp.fone):
        scale = libmp.fone
    delta = libmp.mpf_mul(scale, libmp.from_man_exp(1, 4 - precision), wp, _CEIL)

    for _ in range(LAMBERT_MAX_WIDENINGS):
        lo = libmp.mpf_sub(estimate, delta, wp, _FLOOR)
        hi = libmp.mpf_add(estimate, delta, wp, _CEIL)
        if branch is LambertBranch.PRINCIPAL:
            lo_ok = libmp.mpf_le(lo, minus_one)
            if lo_ok:
                lo = minus_one
            else:
                lo_ok = libmp.mpf_lt(_phi(lo, wp).upper(), z_lo)
            hi_ok = libmp.mpf_lt(z_hi, _phi(hi, wp).lower())
        else:
            hi_ok = libmp.mpf_ge(hi, minus_one)
            if hi_ok:
                hi = minus_one
            else:
                hi_ok = libmp.mpf_lt(_phi(hi, wp).upper(), z_lo)
            lo_ok = libmp.mpf_lt(z_hi, _phi(lo, wp).lower())
        if lo_ok and hi_ok:
            return cr_from_interval(lo, hi, precision)
        delta = libmp.mpf_shift(delta, 1)
    raise RuntimeError(f"could not certify W_{branch} at {z!r}")


def lambert_w(
    branch: LambertBranch, z: CertifiedReal | int | Fraction, precision: int
) -> LambertWResult:
    """Certified real branch of W, defined by W(z)·e^W(z) = z.

    The argument must not lie certifiably below −1/e; the minus_one branch
    additionally needs z < 0 certified. A ball straddling −1/e is accepted and
    its part below the branch point is ignored.
    """
    z = _as_ball(z, precision)
    inv_e = cr_exp(cr_from_int(-1, precision + GUARD_BITS))
    if (z + inv_e).is_negative():
        raise DomainError(f"W is not real below -1/e, got {z!r}")
    if branch is LambertBranch.MINUS_ONE and not z.is_negative():
        raise DomainError(f"W_-1 needs -1/e <= z < 0, got {z!r}")
    estimate = _newton_estimate(branch, z.mid, precision + GUARD_BITS)
    value = _certify_enclosure(branch, z, estimate, precision)
    return LambertWResult(branch, z, value)


# ===================================================================
#  g(x) and its roots
# ===================================================================


def g_function(x: CertifiedReal | int | Fraction, precision: int) -> CertifiedReal:
    """g(x) = −2/(3x²) + 2·exp(−(π/10)·√(2x/3)), for x > 0."""
    x = _as_ball(x, precision)
    if not x.is_positive():
        raise DomainError(f"g(x) needs x > 0, got {x!r}")
    rational_part = cr_div(Fraction(-2, 3), cr_pow(x, 2))
    exponent = cr_mul(cr_div(cr_pi(precision), -10), cr_sqrt(cr_mul(x, Fraction(2, 3))))
    return rational_part + cr_mul(2, cr_exp(exponent))


def g_root_argument(precision: int) -> CertifiedReal:
    """−π√2 / (40·3^(3/4)), the Lambert argument for both roots of g."""
    numerator = cr_mul(cr_pi(precision), cr_sqrt(cr_from_int(2, precision)))
    denominator = cr_mul(40, cr_pow(cr_from_int(3, precision), Fraction(3, 4)))
    return -cr_div(numerator, denominator)


@dataclass(frozen=True)
class GRootCheck:
    """A root of g with the sign test that backs it up.

    left and right are g at root − half_width and root + half_width; g is
    negative–positive across x₁ and positive–negative across x₂.
    """

    index: int
    branch: LambertBranch
    root: CertifiedReal
    half_width: CertifiedReal
    left: CertifiedReal
    right: CertifiedReal

    @property
    def sign_change_margin(self) -> CertifiedReal:
        """−g(x − δ)·g(x + δ); positive exactly when the sign change is certified."""
        return -cr_mul(self.left, self.right)

    @property
    def crosses(self) -> bool:
        if self.index == 1:
            return self.left.is_negative() and self.right.is_positive()
        return self.left.is_positive() and self.right.is_negative()


def _g_root(index: int, branch: LambertBranch, precision: int) -> GRootCheck:
    wp = precision + GUARD_BITS
    w = lambert_w(branch, g_root_argument(wp), wp).value
    scale = cr_div(2400, cr_pow(cr_pi(wp), 2))
    root = cr_mul(scale, cr_pow(w, 2))

    # δ = max(2·rad, 2^(-prec/2)·max(1, |x|))
    magnitude = libmp.mpf_abs(root.mid)
    if libmp.mpf_lt(magnitude, libmp.fone):
        magnitude = libmp.fone
    delta = libmp.mpf_shift(magnitude, -(precision // 2))
    doubled_rad = libmp.mpf_shift(root.rad, 1)
    if libmp.mpf_gt(doubled_rad, delta):
        delta = doubled_rad
    left_point = libmp.mpf_sub(root.mid, delta, wp, _FLOOR)
    right_point = libmp.mpf_add(root.mid, delta, wp, _CEIL)
    left = g_function(CertifiedReal(left_point, libmp.fzero, wp), wp)
    right = g_function(CertifiedReal(right_point, libmp.fzero, wp), wp)
    return GRootCheck(index, branch, root, CertifiedReal(delta, libmp.fzero, wp), left, right)


def g_root_checks(precision: int) -> tuple[GRootCheck, GRootCheck]:
    """Both roots of g with their sign-change evidence (x₁ from W0, x₂ from W−1)."""
    return (
        _g_root(1, LambertBranch.PRINCIPAL, precision),
        _g_root(2, LambertBranch.MINUS_ONE, precision),
    )


def solve_g_roots(precision: int) -> tuple[CertifiedReal, CertifiedReal]:
    checks = g_root_checks(precision)
    for check in checks:
        if not check.crosses:
            raise RuntimeError(f"g does not change sign across x{check.index} = {check.root!r}")
    logger.info(f"Roots of g: x1 = {checks[0].root!r}, x2 = {checks[1].root!r}")
    return checks[0].root, checks[1].root


# ===================================================================
#  Bessel and L ratio bounds
# ===================================================================


def besseli_ratio_bounds(
    nu: int | Fraction,
    x: int | Fraction,
    y: int | Fraction,
    ladder: Sequence[int] | None = None,
) -> dict[str, Comparison]:
    """Lower Bessel ratio bound and both L_ν ratio bounds for 0 < x < y.

    bessel_lower: e^(x−y)(x/y)^ν < I_ν(x)/I_ν(y)
    l_lower:      e^(2√x−2√y) < L_ν(x)/L_ν(y)
    l_upper:      L_ν(x)/L_ν(y) < e^(2√x−2√y)(y/x)^ν
    """
    nu, x, y = Fraction(nu), Fraction(x), Fraction(y)
    if not 0 < x < y:
        raise ValueError(f"ratio bounds need 0 < x < y, got x={x}, y={y}")

    def bessel_i(argument: Fraction, prec: int) -> CertifiedReal:
        return I_nu_from_L(nu, argument * argument / 4, prec)

    def bessel_lower(prec):
        shift = cr_exp(cr_from_rational(x - y, prec))
        return cr_mul(shift, cr_pow(cr_from_rational(x / y, prec), nu))

    def bessel_ratio(prec):
        return cr_div(bessel_i(x, prec), bessel_i(y, prec))

    def root_gap(prec):
        gap = cr_sqrt(cr_from_rational(x, prec)) - cr_sqrt(cr_from_rational(y, prec))
        return cr_exp(cr_mul(2, gap))

    def l_ratio(prec):
        return cr_div(L_nu(nu, x, prec), L_nu(nu, y, prec))

    def l_upper(prec):
        return cr_mul(root_gap(prec), cr_pow(cr_from_rational(y / x, prec), nu))

    return {
        "bessel_lower": certified_comparison(bessel_lower, bessel_ratio, ladder),
        "l_lower": certified_comparison(root_gap, l_ratio, ladder),
        "l_upper": certified_comparison(l_ratio, l_upper, ladder),
    }


def _strictly_decreasing(fn, ys: Sequence[int | Fraction], ladder) -> list[Comparison]:
    ordered = [Fraction(y) for y in ys]
    if any(b <= a for a, b in zip(ordered, ordered[1:], strict=False)):
        raise ValueError("sample points must be strictly increasing")
    return [
        certified_comparison(
            lambda prec, b=b: fn(b, prec), lambda prec, a=a: fn(a, prec), ladder
        )
        for a, b in zip(ordered, ordered[1:], strict=False)
    ]


def _f2_ratio(y: Fraction, prec: int) -> CertifiedReal:
    nu = Fraction(3, 2)
    return cr_div(L_nu(nu, y / 16, prec), L_nu(nu, y / 4, prec))


def _tail_ratio(y: Fraction, prec: int) -> CertifiedReal:
    nu = Fraction(3, 2)
    correction = cr_mul(cr_pow(cr_from_int(2, prec), Fraction(-5, 2)), L_nu(nu, y / 16, prec))
    return cr_div(L_nu(nu, y / 36, prec), cr_sub(L_nu(nu, y / 4, prec), correction))


def l_ratio_decreasing(
    ys: Sequence[int | Fraction], ladder: Sequence[int] | None = None
) -> list[Comparison]:
    """Pairwise certified decrease of L_{3/2}(y/16)/L_{3/2}(y/4) along ys."""
    return _strictly_decreasing(_f2_ratio, ys, ladder)


def tail_ratio_decreasing(
    ys: Sequence[int | Fraction], ladder: Sequence[int] | None = None
) -> list[Comparison]:
    """Pairwise certified decrease of L(y/36)/(L(y/4) − 2^(−5/2)L(y/16)) along ys."""
    return _strictly_decreasing(_tail_ratio, ys, ladder)
