"""Certified ball arithmetic and the precision-ladder comparison protocol.

A CertifiedReal is a midpoint-radius ball over mpmath raw mpf tuples. Every
operation takes its working precision from its operands or an explicit argument;
nothing here reads or writes mpmath's global context, so values can be shared
across worker threads freely.

Transcendental functions go through mpmath's interval kernels (libmpi), which
round endpoints outward, and are converted back to balls afterwards.
"""

from __future__ import annotations

import enum
import logging
import os
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath import libmp

from constants import (
    DEFAULT_MAX_PRECISION_BITS,
    DEFAULT_PRECISION_LADDER,
    GUARD_BITS,
    MAX_PRECISION_ENV,
    MIN_PRECISION_BITS,
    RADIUS_PRECISION,
    REPORT_SIGNIFICANT_DIGITS,
)
from logpart.partition_oracle import p_exact

logger = logging.getLogger(__name__)

_FLOOR = libmp.round_floor
_CEIL = libmp.round_ceiling
_NEAREST = libmp.round_nearest
_ZERO = libmp.fzero


class DomainError(ValueError):
    """An input ball leaves the domain of the requested operation."""


class Verdict(enum.Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    UNDECIDED = "Undecided"
    BOUNDARY = "Boundary"  # non-strict claim whose sides could not be separated

    def __str__(self) -> str:
        return self.value


# ===================================================================
#  Raw mpf helpers
# ===================================================================


def _ulp(x: tuple, prec: int) -> tuple:
    """Spacing of prec-bit floats at |x| (zero for x = 0)."""
    sign, man, exp, bc = x
    if not man:
        return _ZERO
    return libmp.from_man_exp(1, exp + bc - prec)


def _rad_sum(*terms: tuple) -> tuple:
    total = _ZERO
    for term in terms:
        total = libmp.mpf_add(total, term, RADIUS_PRECISION, _CEIL)
    return total


def _rad_mul(a: tuple, b: tuple) -> tuple:
    return libmp.mpf_mul(a, b, RADIUS_PRECISION, _CEIL)


def _rad_abs(x: tuple) -> tuple:
    return libmp.mpf_abs(x, RADIUS_PRECISION, _CEIL)


def _mpf_max(a: tuple, b: tuple) -> tuple:
    return a if libmp.mpf_cmp(a, b) >= 0 else b


def _rounded(op: Callable, x: tuple, y: tuple, prec: int) -> tuple[tuple, tuple]:
    """Round op(x, y) to nearest and return it with a bound on the rounding error."""
    lo = op(x, y, prec, _FLOOR)
    hi = op(x, y, prec, _CEIL)
    if lo == hi:
        return lo, _ZERO
    return op(x, y, prec, _NEAREST), libmp.mpf_sub(hi, lo, RADIUS_PRECISION, _CEIL)


def decimal_string(x: tuple, digits: int = REPORT_SIGNIFICANT_DIGITS) -> str:
    """Scientific notation with a fixed number of significant digits."""
    return libmp.to_str(
        x, digits, strip_zeros=False, min_fixed=0, max_fixed=0, show_zero_exponent=True
    )


def mpf_to_fraction(x: tuple) -> Fraction:
    p, q = libmp.to_rational(x)
    return Fraction(int(p), int(q))


# ===================================================================
#  CertifiedReal
# ===================================================================


@dataclass(frozen=True)
class CertifiedReal:
    """Ball [mid - rad, mid + rad] known to contain the exact quantity."""

    mid: tuple
    rad: tuple
    prec: int

    def __post_init__(self):
        if libmp.mpf_sign(self.rad) < 0 or self.rad in (libmp.finf, libmp.fnan):
            raise ValueError(f"radius must be finite and nonnegative, got {self.rad}")
        if self.mid in (libmp.finf, libmp.fninf, libmp.fnan):
            raise ValueError("midpoint must be finite")

    # ── Endpoints ─────────────────────────────────────────────────────────

    def lower(self) -> tuple:
        return libmp.mpf_sub(self.mid, self.rad, self.prec + GUARD_BITS, _FLOOR)

    def upper(self) -> tuple:
        return libmp.mpf_add(self.mid, self.rad, self.prec + GUARD_BITS, _CEIL)

    def is_positive(self) -> bool:
        return libmp.mpf_sign(self.lower()) > 0

    def is_negative(self) -> bool:
        return libmp.mpf_sign(self.upper()) < 0

    def is_exact(self) -> bool:
        return self.rad == _ZERO

    def contains(self, value: int | Fraction | CertifiedReal) -> bool:
        if isinstance(value, CertifiedReal):
            return (
                libmp.mpf_cmp(self.lower(), value.lower()) <= 0
                and libmp.mpf_cmp(value.upper(), self.upper()) <= 0
            )
        q = Fraction(value)
        return mpf_to_fraction(self.lower()) <= q <= mpf_to_fraction(self.upper())

    def overlaps(self, other: CertifiedReal) -> bool:
        return not (
            libmp.mpf_lt(self.upper(), other.lower()) or libmp.mpf_lt(other.upper(), self.lower())
        )

    # ── Conversions ───────────────────────────────────────────────────────

    def __float__(self) -> float:
        return libmp.to_float(self.mid)

    def mid_str(self, digits: int = REPORT_SIGNIFICANT_DIGITS) -> str:
        return decimal_string(self.mid, digits)

    def rad_str(self, digits: int = REPORT_SIGNIFICANT_DIGITS) -> str:
        return decimal_string(self.rad, digits)

    def __repr__(self) -> str:
        return f"CertifiedReal({self.mid_str(20)} ± {self.rad_str(3)}, {self.prec} bits)"

    # ── Operators ─────────────────────────────────────────────────────────

    def __neg__(self) -> CertifiedReal:
        return CertifiedReal(libmp.mpf_neg(self.mid), self.rad, self.prec)

    def __abs__(self) -> CertifiedReal:
        return cr_abs(self)

    def __add__(self, other):
        return cr_add(self, other)

    def __radd__(self, other):
        return cr_add(other, self)

    def __sub__(self, other):
        return cr_sub(self, other)

    def __rsub__(self, other):
        return cr_sub(other, self)

    def __mul__(self, other):
        return cr_mul(self, other)

    def __rmul__(self, other):
        return cr_mul(other, self)

    def __truediv__(self, other):
        return cr_div(self, other)

    def __rtruediv__(self, other):
        return cr_div(other, self)


Number = int | Fraction | CertifiedReal


def cr_from_rational(value: int | Fraction, prec: int) -> CertifiedReal:
    """Ball around an exact rational; radius zero when it is representable."""
    q = Fraction(value)
    mid, err = _rounded(
        lambda a, b, p, rnd: libmp.from_rational(a, b, p, rnd), q.numerator, q.denominator, prec
    )
    return CertifiedReal(mid, err, prec)


def cr_from_int(value: int, prec: int) -> CertifiedReal:
    return cr_from_rational(value, prec)


def _coerce(value: Number | float, prec: int) -> CertifiedReal:
    if isinstance(value, CertifiedReal):
        return value
    if isinstance(value, (int, Fraction, float)):
        return cr_from_rational(Fraction(value), prec)
    raise TypeError(f"cannot use {type(value).__name__} as a certified operand")


def _coerce_pair(a, b) -> tuple[CertifiedReal, CertifiedReal]:
    if isinstance(a, CertifiedReal):
        prec = a.prec
    elif isinstance(b, CertifiedReal):
        prec = b.prec
    else:
        raise TypeError("at least one operand must be a CertifiedReal")
    return _coerce(a, prec), _coerce(b, prec)


# ===================================================================
#  Field operations
# ===================================================================


def cr_add(a: Number, b: Number) -> CertifiedReal:
    a, b = _coerce_pair(a, b)
    prec = max(a.prec, b.prec)
    mid, err = _rounded(libmp.mpf_add, a.mid, b.mid, prec)
    return CertifiedReal(mid, _rad_sum(a.rad, b.rad, err), prec)


def cr_sub(a: Number, b: Number) -> CertifiedReal:
    a, b = _coerce_pair(a, b)
    prec = max(a.prec, b.prec)
    mid, err = _rounded(libmp.mpf_sub, a.mid, b.mid, prec)
    return CertifiedReal(mid, _rad_sum(a.rad, b.rad, err), prec)


def cr_mul(a: Number, b: Number) -> CertifiedReal:
    a, b = _coerce_pair(a, b)
    prec = max(a.prec, b.prec)
    mid, err = _rounded(libmp.mpf_mul, a.mid, b.mid, prec)
    rad = _rad_sum(
        _rad_mul(_rad_abs(a.mid), b.rad),
        _rad_mul(_rad_abs(b.mid), a.rad),
        _rad_mul(a.rad, b.rad),
        err,
    )
    return CertifiedReal(mid, rad, prec)


def cr_div(a: Number, b: Number) -> CertifiedReal:
    a, b = _coerce_pair(a, b)
    if not (b.is_positive() or b.is_negative()):
        raise DomainError(f"division by a ball containing zero: {b!r}")
    prec = max(a.prec, b.prec)
    mid, err = _rounded(libmp.mpf_div, a.mid, b.mid, prec)
    if a.rad == _ZERO and b.rad == _ZERO:
        return CertifiedReal(mid, err, prec)
    # |x/y - am/bm| <= (ra + |am/bm| rb) / (|bm| - rb)
    q_abs = _rad_sum(_rad_abs(mid), err)
    numerator = _rad_sum(a.rad, _rad_mul(q_abs, b.rad))
    denominator = libmp.mpf_sub(libmp.mpf_abs(b.mid), b.rad, RADIUS_PRECISION, _FLOOR)
    spread = libmp.mpf_div(numerator, denominator, RADIUS_PRECISION, _CEIL)
    return CertifiedReal(mid, _rad_sum(spread, err), prec)


def cr_neg(a: CertifiedReal) -> CertifiedReal:
    return -a


def cr_abs(a: CertifiedReal) -> CertifiedReal:
    if libmp.mpf_sign(a.lower()) >= 0:
        return a
    if libmp.mpf_sign(a.upper()) <= 0:
        return -a
    # straddles zero: [0, max(|lo|, |hi|)]
    top = _mpf_max(libmp.mpf_abs(a.lower()), libmp.mpf_abs(a.upper()))
    return cr_from_interval(_ZERO, top, a.prec)


def cr_sum(values: Sequence[Number], prec: int) -> CertifiedReal:
    total = cr_from_int(0, prec)
    for value in values:
        total = cr_add(total, value)
    return total


def cr_round(a: CertifiedReal, prec: int) -> CertifiedReal:
    """Re-round a ball to a lower working precision without losing containment."""
    mid = libmp.mpf_pos(a.mid, prec, _NEAREST)
    shift = libmp.mpf_abs(libmp.mpf_sub(a.mid, mid, RADIUS_PRECISION, libmp.round_up))
    return CertifiedReal(mid, _rad_sum(a.rad, shift), prec)


# ===================================================================
#  Transcendental functions
# ===================================================================


def _to_interval(a: CertifiedReal, wp: int) -> tuple[tuple, tuple]:
    return (
        libmp.mpf_sub(a.mid, a.rad, wp, _FLOOR),
        libmp.mpf_add(a.mid, a.rad, wp, _CEIL),
    )


def cr_from_interval(lo: tuple, hi: tuple, prec: int) -> CertifiedReal:
    mid = libmp.mpf_shift(libmp.mpf_add(lo, hi, prec, _NEAREST), -1)
    rad = _mpf_max(
        libmp.mpf_sub(hi, mid, RADIUS_PRECISION, _CEIL),
        libmp.mpf_sub(mid, lo, RADIUS_PRECISION, _CEIL),
    )
    if libmp.mpf_sign(rad) < 0:
        rad = _ZERO
    return CertifiedReal(mid, rad, prec)


def _apply_interval(kernel: Callable, a: CertifiedReal) -> CertifiedReal:
    wp = a.prec + GUARD_BITS
    lo, hi = kernel(_to_interval(a, wp), wp)
    if lo in (libmp.fninf, libmp.fnan) or hi in (libmp.finf, libmp.fnan):
        raise DomainError(f"unbounded enclosure for {a!r}")
    # one extra ulp at the working precision on each side
    lo = libmp.mpf_sub(lo, _ulp(lo, wp), wp, _FLOOR)
    hi = libmp.mpf_add(hi, _ulp(hi, wp), wp, _CEIL)
    return cr_from_interval(lo, hi, a.prec)


def cr_exp(a: CertifiedReal) -> CertifiedReal:
    return _apply_interval(libmp.mpi_exp, a)


def cr_log(a: CertifiedReal) -> CertifiedReal:
    if not a.is_positive():
        raise DomainError(f"log of a ball that is not strictly positive: {a!r}")
    if a.is_exact() and a.mid == libmp.fone:
        return CertifiedReal(_ZERO, _ZERO, a.prec)
    return _apply_interval(libmp.mpi_log, a)


def cr_sqrt(a: CertifiedReal) -> CertifiedReal:
    if not a.is_positive():
        raise DomainError(f"sqrt of a ball that is not strictly positive: {a!r}")
    return _apply_interval(libmp.mpi_sqrt, a)


def cr_pow(a: CertifiedReal, exponent: int | Fraction) -> CertifiedReal:
    """a ** exponent for a rational exponent; non-integer powers need a > 0."""
    q = Fraction(exponent)
    if q.denominator == 1:
        e = q.numerator
        if e < 0 and not (a.is_positive() or a.is_negative()):
            raise DomainError(f"negative power of a ball containing zero: {a!r}")
        return _apply_interval(lambda s, wp: libmp.mpi_pow_int(s, e, wp), a)
    if not a.is_positive():
        raise DomainError(f"fractional power of a ball that is not strictly positive: {a!r}")
    if q == Fraction(1, 2):
        return cr_sqrt(a)

    def kernel(s, wp):
        t = (
            libmp.from_rational(q.numerator, q.denominator, wp, _FLOOR),
            libmp.from_rational(q.numerator, q.denominator, wp, _CEIL),
        )
        return libmp.mpi_pow(s, t, wp)

    return _apply_interval(kernel, a)


def cr_gamma(a: CertifiedReal) -> CertifiedReal:
    if not a.is_positive():
        raise DomainError(f"gamma is only used on positive balls, got {a!r}")
    return _apply_interval(libmp.mpi_gamma, a)


def cr_pi(prec: int) -> CertifiedReal:
    """π with radius one ulp at the working precision."""
    mid = libmp.mpf_pi(prec, _NEAREST)
    return CertifiedReal(mid, _ulp(mid, prec), prec)


# ===================================================================
#  log p(n)
# ===================================================================


@lru_cache(maxsize=65536)
def log_p_certified(n: int, precision_bits: int) -> CertifiedReal:
    """Enclosure of log p(n), radius within 2 ulp at precision_bits."""
    if n < 0:
        raise ValueError(f"log p(n) needs n >= 0, got {n}")
    value = p_exact(n)
    if value == 1:
        return CertifiedReal(_ZERO, _ZERO, precision_bits)
    wp = precision_bits + GUARD_BITS
    return cr_round(cr_log(cr_from_int(value, wp)), precision_bits)


# ===================================================================
#  Precision ladder
# ===================================================================


def max_precision_bits() -> int:
    """Ladder cap from LOGPART_MAX_PRECISION_BITS, falling back to the default."""
    raw = os.environ.get(MAX_PRECISION_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_MAX_PRECISION_BITS
    try:
        value = int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {MAX_PRECISION_ENV}={raw!r}")
        return DEFAULT_MAX_PRECISION_BITS
    if value < MIN_PRECISION_BITS:
        logger.warning(f"Ignoring {MAX_PRECISION_ENV}={value}: below {MIN_PRECISION_BITS} bits")
        return DEFAULT_MAX_PRECISION_BITS
    return value


def precision_ladder(start: int | None = None, cap: int | None = None) -> tuple[int, ...]:
    """Precisions to try in order, doubling from start (or the default rungs) up to cap."""
    cap = max_precision_bits() if cap is None else cap
    if start is None:
        rungs = [p for p in DEFAULT_PRECISION_LADDER if p <= cap]
    else:
        rungs = []
        prec = start
        while prec <= cap:
            rungs.append(prec)
            prec *= 2
    return tuple(rungs) if rungs else (max(MIN_PRECISION_BITS, min(cap, start or cap)),)


Expression = Callable[[int], CertifiedReal] | CertifiedReal | int | Fraction


def _evaluate(expr: Expression, prec: int) -> CertifiedReal:
    if callable(expr):
        return expr(prec)
    return _coerce(expr, prec)


@dataclass(frozen=True)
class Comparison:
    """Outcome of a ladder comparison: verdict, margin rhs - lhs, deciding precision."""

    verdict: Verdict
    margin: CertifiedReal
    precision: int


@dataclass(frozen=True)
class LabeledComparison:
    """A comparison tagged with the name of the inequality it decided."""

    label: str
    comparison: Comparison

    @property
    def verdict(self) -> Verdict:
        return self.comparison.verdict


def certified_comparison(
    lhs: Expression,
    rhs: Expression,
    ladder: Sequence[int] | None = None,
    *,
    strict: bool = True,
) -> Comparison:
    """Decide lhs < rhs (or lhs <= rhs when strict is False) along the ladder.

    Holds once the margin rhs - lhs is certified positive, Fails once it is
    certified negative. If no rung separates the sides the verdict is Undecided
    for strict claims and Boundary for non-strict ones.
    """
    rungs = tuple(ladder) if ladder is not None else precision_ladder()
    if not rungs:
        raise ValueError("precision ladder is empty")
    margin = None
    for prec in rungs:
        margin = cr_sub(_evaluate(rhs, prec), _evaluate(lhs, prec))
        if margin.is_positive():
            return Comparison(Verdict.HOLDS, margin, prec)
        if margin.is_negative():
            return Comparison(Verdict.FAILS, margin, prec)
        logger.debug(f"Sides overlap at {prec} bits (margin {margin!r}), escalating")
    verdict = Verdict.UNDECIDED if strict else Verdict.BOUNDARY
    return Comparison(verdict, margin, rungs[-1])


def certified_strict_less(
    lhs: Expression, rhs: Expression, ladder: Sequence[int] | None = None
) -> Verdict:
    return certified_comparison(lhs, rhs, ladder).verdict


def certified_less_equal(
    lhs: Expression, rhs: Expression, ladder: Sequence[int] | None = None
) -> Verdict:
    return certified_comparison(lhs, rhs, ladder, strict=False).verdict


_VERDICT_RANK = {Verdict.FAILS: 0, Verdict.UNDECIDED: 1, Verdict.BOUNDARY: 2, Verdict.HOLDS: 3}


def weakest(comparisons: Sequence[Comparison]) -> Comparison:
    """The comparison that decides a conjunction: any failure, else the least settled part."""
    if not comparisons:
        raise ValueError("no comparisons to combine")
    return min(comparisons, key=lambda c: _VERDICT_RANK[c.verdict])


def exact_comparison(margin: int | Fraction, prec: int) -> Comparison:
    """Comparison whose margin is an exact rational; zero counts as a failure of lhs < rhs."""
    verdict = Verdict.HOLDS if margin > 0 else Verdict.FAILS
    return Comparison(verdict, cr_from_rational(margin, prec), prec)
