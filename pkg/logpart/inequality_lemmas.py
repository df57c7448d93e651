"""Elementary inequalities used by the partition estimates, as certified predicates.

  L1  (1−x)^(−3/2) < 1 + (3/2)x + (3/8)x^(3/2)          0 < x <= 1/48
  L2  (1−x)^(−α) <= 1 + (1/(1−c))^(α+1)·α·x              α >= 1/2, 0 < x <= c < 1
  L3  1 >= (1+x)^(−α) >= 1 − αx                          α >= 1/2, 0 <= x <= 1
  L4  x(1−x) < log(1+x)                                  x > 0
  L5  log(1−x) >= −x/(1−x)                               0 < x < 1
  L6  |log(1±x)| <= −log(1−x)                            0 < x < 1
  L7  x(1 − x/2) < log(1+x)                              x > 0
"""

from __future__ import annotations

import enum
import logging
import random
from collections import Counter
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from logpart.precision_core import (
    CertifiedReal,
    Comparison,
    Verdict,
    certified_comparison,
    cr_from_rational,
    cr_log,
    cr_pow,
    precision_ladder,
    weakest,
)

logger = logging.getLogger(__name__)

_RANDOM_DENOMINATOR = 10**6


class HypothesisError(ValueError):
    """Lemma parameters fall outside the region where the lemma is claimed."""


class LemmaId(enum.Enum):
    L1 = "L1"
    L2 = "L2"
    L3 = "L3"
    L4 = "L4"
    L5 = "L5"
    L6 = "L6"
    L7 = "L7"

    @property
    def strict(self) -> bool:
        return self in (LemmaId.L1, LemmaId.L4, LemmaId.L7)

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class LemmaInstance:
    lemma_id: LemmaId
    parameters: Mapping[str, Fraction | str]
    verdict: Verdict
    comparison: Comparison


@dataclass
class LemmaSweep:
    lemma_id: LemmaId
    instances: list[LemmaInstance] = field(default_factory=list)

    @property
    def counts(self) -> Counter:
        return Counter(instance.verdict for instance in self.instances)


# ===================================================================
#  Hypotheses
# ===================================================================


def _fraction(parameters: Mapping[str, object], name: str) -> Fraction:
    if name not in parameters:
        raise HypothesisError(f"missing parameter {name!r}")
    try:
        return Fraction(parameters[name])
    except (TypeError, ValueError) as e:
        raise HypothesisError(f"parameter {name!r} is not a rational: {parameters[name]!r}") from e


def _normalize(lemma_id: LemmaId, parameters: Mapping[str, object]) -> dict[str, Fraction | str]:
    """Validate the hypothesis region and return exact parameters."""
    x = _fraction(parameters, "x")
    values: dict[str, Fraction | str] = {"x": x}

    if lemma_id is LemmaId.L1:
        if not 0 < x <= Fraction(1, 48):
            raise HypothesisError(f"L1 needs 0 < x <= 1/48, got x = {x}")
    elif lemma_id is LemmaId.L2:
        alpha, c = _fraction(parameters, "alpha"), _fraction(parameters, "c")
        if alpha < Fraction(1, 2) or not 0 < x <= c < 1:
            raise HypothesisError(f"L2 needs alpha >= 1/2, 0 < x <= c < 1, got {alpha}, {x}, {c}")
        values.update(alpha=alpha, c=c)
    elif lemma_id is LemmaId.L3:
        alpha = _fraction(parameters, "alpha")
        if alpha < Fraction(1, 2) or not 0 <= x <= 1:
            raise HypothesisError(f"L3 needs alpha >= 1/2, 0 <= x <= 1, got {alpha}, {x}")
        values["alpha"] = alpha
    elif lemma_id in (LemmaId.L4, LemmaId.L7):
        if x <= 0:
            raise HypothesisError(f"{lemma_id} needs x > 0, got x = {x}")
    else:
        if not 0 < x < 1:
            raise HypothesisError(f"{lemma_id} needs 0 < x < 1, got x = {x}")
        if lemma_id is LemmaId.L6 and "sign" in parameters:
            sign = str(parameters["sign"])
            if sign not in ("+", "-"):
                raise HypothesisError(f"L6 sign must be '+' or '-', got {sign!r}")
            values["sign"] = sign
    return values


# ===================================================================
#  Sides of each inequality
# ===================================================================

Side = Callable[[int], CertifiedReal]
# Each claim reads lhs < rhs (strict) or lhs <= rhs.
Claim = tuple[Side, Side]


def _q(value: Fraction) -> Side:
    return lambda p: cr_from_rational(value, p)


def _power(base: Fraction, exponent: Fraction) -> Side:
    def evaluate(p):
        if base == 1:
            return cr_from_rational(1, p)
        return cr_pow(cr_from_rational(base, p), exponent)

    return evaluate


def _log(argument: Fraction) -> Side:
    return lambda p: cr_log(cr_from_rational(argument, p))


def _claims(lemma_id: LemmaId, v: Mapping[str, Fraction | str]) -> list[Claim]:
    x = v["x"]
    if lemma_id is LemmaId.L1:
        root_term = _power(x, Fraction(3, 2))

        def bound(p):
            return 1 + cr_from_rational(Fraction(3, 2) * x, p) + Fraction(3, 8) * root_term(p)

        return [(_power(1 - x, Fraction(-3, 2)), bound)]
    if lemma_id is LemmaId.L2:
        alpha, c = v["alpha"], v["c"]
        slope = _power(1 / (1 - c), alpha + 1)
        return [(_power(1 - x, -alpha), lambda p: 1 + cr_from_rational(alpha * x, p) * slope(p))]
    if lemma_id is LemmaId.L3:
        alpha = v["alpha"]
        middle = _power(1 + x, -alpha)
        return [(middle, _q(Fraction(1))), (_q(1 - alpha * x), middle)]
    if lemma_id is LemmaId.L4:
        return [(_q(x * (1 - x)), _log(1 + x))]
    if lemma_id is LemmaId.L5:
        return [(_q(-x / (1 - x)), _log(1 - x))]
    if lemma_id is LemmaId.L6:
        # |log(1−x)| <= −log(1−x) is log(1−x) <= 0; log(1+x) > 0 drops the bars
        minus_claim = (_log(1 - x), _q(Fraction(0)))
        plus_claim = (_log(1 + x), lambda p: -cr_log(cr_from_rational(1 - x, p)))
        sign = v.get("sign")
        if sign == "-":
            return [minus_claim]
        if sign == "+":
            return [plus_claim]
        return [plus_claim, minus_claim]
    return [(_q(x * (1 - x / 2)), _log(1 + x))]


# ===================================================================
#  Public API
# ===================================================================


def evaluate_lemma(
    lemma_id: LemmaId, parameters: Mapping[str, object], precision: int | None = None
) -> LemmaInstance:
    """Decide one lemma instance; precision is the first rung of the ladder."""
    lemma_id = LemmaId(lemma_id)
    values = _normalize(lemma_id, parameters)
    ladder = precision_ladder(precision)
    comparisons = [
        certified_comparison(lhs, rhs, ladder, strict=lemma_id.strict)
        for lhs, rhs in _claims(lemma_id, values)
    ]
    decided = weakest(comparisons)
    if decided.verdict in (Verdict.FAILS, Verdict.UNDECIDED):
        logger.warning(f"{lemma_id} at {values}: {decided.verdict}")
    return LemmaInstance(lemma_id, values, decided.verdict, decided)


def check_lemma(
    lemma_id: LemmaId, parameters: Mapping[str, object], precision: int | None = None
) -> Verdict:
    return evaluate_lemma(lemma_id, parameters, precision).verdict


def sweep_lemma(
    lemma_id: LemmaId, grid: Iterable[Mapping[str, object]], precision: int | None = None
) -> LemmaSweep:
    sweep = LemmaSweep(LemmaId(lemma_id))
    for parameters in grid:
        sweep.instances.append(evaluate_lemma(lemma_id, parameters, precision))
    logger.info(f"Lemma {lemma_id}: {dict(sweep.counts)}")
    return sweep


def lemma_grid(
    lemma_id: LemmaId, n_from: int, n_to: int, alpha: Fraction | int | None = None
) -> list[dict[str, Fraction]]:
    """Grid points indexed by n: x = n/4800 for L1 and L2 (c = 1/48), else x = n/100."""
    lemma_id = LemmaId(lemma_id)
    denominator = 4800 if lemma_id in (LemmaId.L1, LemmaId.L2) else 100
    grid = []
    for n in range(n_from, n_to + 1):
        point: dict[str, Fraction] = {"x": Fraction(n, denominator)}
        if lemma_id is LemmaId.L2:
            point.update(alpha=Fraction(2 if alpha is None else alpha), c=Fraction(1, 48))
        elif lemma_id is LemmaId.L3:
            point["alpha"] = Fraction(Fraction(1, 2) if alpha is None else alpha)
        grid.append(point)
    return grid


def _uniform(rng: random.Random, low: Fraction, high: Fraction, *, closed_high: bool) -> Fraction:
    """Random rational in (low, high] or (low, high)."""
    top = _RANDOM_DENOMINATOR if closed_high else _RANDOM_DENOMINATOR - 1
    return low + (high - low) * Fraction(rng.randint(1, top), _RANDOM_DENOMINATOR)


def random_instances(
    lemma_id: LemmaId, count: int, rng: random.Random
) -> list[dict[str, Fraction | str]]:
    """Random rational parameter sets inside the hypothesis region of a lemma."""
    lemma_id = LemmaId(lemma_id)
    zero, one = Fraction(0), Fraction(1)
    instances: list[dict[str, Fraction | str]] = []
    for _ in range(count):
        if lemma_id is LemmaId.L1:
            point = {"x": _uniform(rng, zero, Fraction(1, 48), closed_high=True)}
        elif lemma_id is LemmaId.L2:
            c = _uniform(rng, zero, Fraction(99, 100), closed_high=True)
            point = {
                "x": _uniform(rng, zero, c, closed_high=True),
                "c": c,
                "alpha": Fraction(rng.randint(1, 20), 2),
            }
        elif lemma_id is LemmaId.L3:
            point = {
                "x": _uniform(rng, zero, one, closed_high=True),
                "alpha": Fraction(rng.randint(1, 20), 2),
            }
        elif lemma_id in (LemmaId.L4, LemmaId.L7):
            point = {"x": _uniform(rng, zero, Fraction(10), closed_high=True)}
        elif lemma_id is LemmaId.L6:
            point = {"x": _uniform(rng, zero, one, closed_high=False), "sign": rng.choice("+-")}
        else:
            point = {"x": _uniform(rng, zero, one, closed_high=False)}
        instances.append(point)
    return instances
