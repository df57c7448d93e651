#!/usr/bin/env python3
"""
Unit tests for logpart

Run with: pytest test_unit.py -v
Run the long acceptance ranges too: LOGPART_SLOW_TESTS=1 pytest test_unit.py -v
"""

import io
import json
import logging
import math
import os
import random
import sys
from fractions import Fraction
from unittest import mock

import mpmath
import pytest
from mpmath import libmp

import constants
import verifier_cli
from logpart.difference_analysis import (
    MuFamily,
    ThresholdFamily,
    bessenrodt_ono_failures,
    bessenrodt_ono_sum_check,
    delta_r_log_p,
    desalvo_pak_target,
    desalvo_pak_upper,
    empirical_sign_threshold_logp,
    g_bound_breakdown,
    g_bound_checks,
    h_r,
    lambert_argument_in_domain,
    log_difference_positive,
    logconcave_check,
    mu_family_derivative,
    p2_of_n,
    sandwich_check,
    theorem_31_chain,
    threshold_constants,
    u_r_bound,
    verify_bessenrodt_ono,
    verify_conjecture_dp,
    verify_desalvo_pak_chain,
    verify_h_r_bounds,
    verify_theorem_11,
    verify_theorem_12,
    verify_theorem_31,
    verify_theorem_31_r1_chain,
    verify_theorem_41,
)
from logpart.hrr_terms import (
    f1_closed,
    f_k,
    fk_closed,
    g_tail,
    hrr_interval,
    lehmer_bound,
    lehmer_check,
    ratio_bound_checks,
    term_bundle,
    term_bundle_checks,
)
from logpart.inequality_lemmas import (
    HypothesisError,
    LemmaId,
    check_lemma,
    evaluate_lemma,
    lemma_grid,
    random_instances,
    sweep_lemma,
)
from logpart.partition_oracle import (
    EnumerationBudgetError,
    delta_r_p,
    empirical_sign_threshold_p,
    good_asymptotic,
    p_brute,
    p_exact,
    partition_table,
)
from logpart.precision_core import (
    CertifiedReal,
    DomainError,
    Verdict,
    certified_comparison,
    certified_less_equal,
    certified_strict_less,
    cr_add,
    cr_div,
    cr_exp,
    cr_from_int,
    cr_from_rational,
    cr_log,
    cr_mul,
    cr_pi,
    cr_pow,
    cr_round,
    cr_sqrt,
    cr_sub,
    log_p_certified,
    max_precision_bits,
    mpf_to_fraction,
    precision_ladder,
    weakest,
)
from logpart.reports import Report, ReportRow, read_csv, report_document, write_csv
from logpart.special_functions import (
    I_nu_from_L,
    LambertBranch,
    besseli_ratio_bounds,
    g_function,
    g_root_checks,
    l_ratio_decreasing,
    lambert_w,
    mu,
    mu_at,
    rising_factorial,
    solve_g_roots,
    tail_ratio_decreasing,
    zeta_7_4,
)
from logpart.utils import (
    apply_config,
    load_config,
    parallel_sweep,
    validate_order,
    validate_output_path,
    validate_precision,
    validate_range,
)

slow = pytest.mark.skipif(
    os.environ.get(constants.SLOW_TESTS_ENV) != "1",
    reason=f"set {constants.SLOW_TESTS_ENV}=1 for the long acceptance ranges",
)

SHORT_LADDER = (64, 128, 256)


def ball(mid: Fraction, rad: Fraction, prec: int = 53) -> CertifiedReal:
    return CertifiedReal(
        libmp.from_rational(mid.numerator, mid.denominator, prec, libmp.round_nearest),
        libmp.from_rational(rad.numerator, rad.denominator, prec, libmp.round_ceiling),
        prec,
    )


def verdicts(checks) -> set:
    return {check.verdict for check in checks}


# ─── Constants ────────────────────────────────────────────────────────────


class TestConstantsModule:
    """Test suite for constants.py"""

    def test_ladder_doubles_up_to_cap(self):
        ladder = constants.DEFAULT_PRECISION_LADDER
        assert ladder[0] == 64
        assert ladder[-1] == constants.DEFAULT_MAX_PRECISION_BITS
        assert all(b == 2 * a for a, b in zip(ladder, ladder[1:], strict=False))

    def test_cli_starts_one_rung_up(self):
        assert constants.CLI_START_PRECISION == 128

    def test_exit_codes(self):
        assert (constants.EXIT_OK, constants.EXIT_FAILURES, constants.EXIT_USAGE) == (0, 1, 2)

    def test_csv_columns(self):
        assert constants.CSV_COLUMNS == ("statement_id", "n", "r", "margin", "radius", "verdict")

    def test_version_format(self):
        """Version should be X.XX (exactly 2 parts)."""
        parts = constants.APP_VERSION.split(".")
        assert len(parts) == 2
        assert all(part.isdigit() for part in parts)

    def test_paths_under_app_data_dir(self):
        assert constants.CONFIG_FILE.parent == constants.APP_DATA_DIR
        assert constants.LOG_FILE.parent == constants.APP_DATA_DIR


# ─── logpart/partition_oracle.py ──────────────────────────────────────────


class TestPartitionOracle:
    """Exact p(n), enumeration oracle and finite differences"""

    @pytest.mark.parametrize("n,expected", [(0, 1), (1, 1), (5, 7), (100, 190569292)])
    def test_known_values(self, n, expected):
        assert p_exact(n) == expected

    @pytest.mark.parametrize("n,expected", [(0, 1), (4, 5), (7, 15)])
    def test_brute_known_values(self, n, expected):
        assert p_brute(n) == expected

    def test_brute_agrees_with_recurrence(self):
        assert all(p_brute(n) == p_exact(n) for n in range(constants.ENUMERATION_CHECK_MAX_N + 1))

    def test_brute_budget(self):
        with pytest.raises(EnumerationBudgetError, match="budget"):
            p_brute(constants.BRUTE_FORCE_MAX_N + 1)

    def test_negative_n_rejected(self):
        with pytest.raises(ValueError, match="n >= 0"):
            p_exact(-1)

    def test_strictly_increasing_from_two(self):
        values = [p_exact(n) for n in range(0, 1001)]
        assert values[1] == values[0]
        assert all(b > a for a, b in zip(values[1:], values[2:], strict=False))

    def test_table_grows_on_demand(self):
        p_exact(300)
        assert partition_table().max_n >= 300
        assert partition_table()[0] == 1

    @pytest.mark.parametrize("n,r,expected", [(0, 1, 0), (5, 1, 4), (2, 2, 1)])
    def test_delta_examples(self, n, r, expected):
        assert delta_r_p(n, r) == expected

    def test_pascal_consistency(self):
        for r in range(2, 6):
            for n in range(0, 200, 7):
                assert delta_r_p(n, r) == delta_r_p(n + 1, r - 1) - delta_r_p(n, r - 1)

    def test_delta_rejects_order_zero(self):
        with pytest.raises(ValueError, match="order"):
            delta_r_p(3, 0)

    @pytest.mark.parametrize("r,n_max,expected", [(1, 100, 1), (2, 1000, 6), (3, 2000, 26)])
    def test_sign_thresholds(self, r, n_max, expected):
        assert empirical_sign_threshold_p(r, n_max) == expected

    def test_sign_threshold_logs_certified_range(self, caplog):
        caplog.set_level(logging.INFO, logger="logpart.partition_oracle")
        assert empirical_sign_threshold_p(2, 500) == 6
        assert "certified only up to n = 500" in caplog.text

    @slow
    @pytest.mark.parametrize("r,expected", [(2, 6), (3, 26), (4, 94)])
    def test_sign_thresholds_to_5000(self, r, expected):
        assert empirical_sign_threshold_p(r, 5000) == expected

    def test_sign_threshold_needs_room(self):
        with pytest.raises(ValueError, match="n_max"):
            empirical_sign_threshold_p(5, 3)

    def test_good_asymptotic(self):
        assert good_asymptotic(1) == 0
        assert good_asymptotic(4) == pytest.approx(18.69, abs=0.01)

    def test_r4_threshold_against_asymptotic(self):
        # the true threshold is 94, about five times the leading-order estimate
        threshold = empirical_sign_threshold_p(4, 2000)
        assert threshold == 94
        assert 1 / 3 <= threshold / good_asymptotic(4) <= 10


# ─── logpart/precision_core.py ────────────────────────────────────────────


class TestBallArithmetic:
    """Containment and domain errors of the ball operations"""

    def test_exact_addition(self):
        total = cr_add(cr_from_int(1, 64), cr_from_int(1, 64))
        assert total.is_exact()
        assert total.contains(2)

    def test_product_radius(self):
        product = cr_mul(ball(Fraction(2), Fraction(1, 10)), ball(Fraction(3), Fraction(1, 10)))
        assert product.contains(6)
        assert mpf_to_fraction(product.rad) >= Fraction(51, 100)
        assert product.contains(Fraction(651, 100)) and product.contains(Fraction(549, 100))

    def test_division_by_ball_around_zero(self):
        with pytest.raises(DomainError, match="division"):
            cr_div(cr_from_int(1, 64), ball(Fraction(0), Fraction(1, 2)))

    def test_log_and_exp_of_trivial_points(self):
        assert cr_log(cr_from_int(1, 64)).contains(0)
        assert cr_exp(cr_from_int(0, 64)).contains(1)

    def test_sqrt_encloses(self):
        root = cr_sqrt(cr_from_int(23, 128))
        lo, hi = mpf_to_fraction(root.lower()), mpf_to_fraction(root.upper())
        assert lo * lo <= 23 <= hi * hi
        assert hi - lo < Fraction(1, 2**100)

    def test_log_of_nonpositive_ball(self):
        with pytest.raises(DomainError, match="log"):
            cr_log(ball(Fraction(0), Fraction(1, 4)))
        with pytest.raises(DomainError, match="sqrt"):
            cr_sqrt(cr_from_int(-1, 64))

    def test_pi_radius_at_most_one_ulp(self):
        pi = cr_pi(128)
        assert mpf_to_fraction(pi.rad) <= Fraction(4, 2**128)
        assert pi.contains(Fraction(314159265358979, 10**14)) is False
        assert float(pi) == math.pi

    @pytest.mark.parametrize("sign", [1, -1])
    def test_round_keeps_midpoint_below_nearest(self, sign):
        # nearest rounding to 64 bits lands on ±1 and leaves a 135-bit difference
        value = sign * (1 - Fraction(1, 2**66) + Fraction(1, 2**200))
        exact = cr_from_rational(value, 256)
        assert exact.is_exact()
        rounded = cr_round(exact, 64)
        assert rounded.contains(value)
        assert rounded.contains(exact)

    def test_round_widens_radius(self):
        original = ball(Fraction(1, 3), Fraction(1, 2**150), prec=256)
        rounded = cr_round(original, 64)
        assert rounded.contains(original)
        assert rounded.prec == 64

    def test_random_rational_containment(self):
        rng = random.Random(20240117)
        for _ in range(1000):
            a = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**4))
            b = Fraction(rng.randint(1, 10**6), rng.randint(1, 10**4))
            x, y = cr_from_rational(a, 64), cr_from_rational(b, 64)
            assert cr_add(x, y).contains(a + b)
            assert cr_sub(x, y).contains(a - b)
            assert cr_mul(x, y).contains(a * b)
            assert cr_div(x, y).contains(a / b)

    def test_rational_power(self):
        eight = cr_pow(cr_from_int(4, 64), Fraction(3, 2))
        assert eight.contains(8)
        with pytest.raises(DomainError):
            cr_pow(cr_from_int(-4, 64), Fraction(1, 3))

    def test_radius_shrinks_along_ladder(self):
        radii = [mpf_to_fraction(cr_log(cr_from_int(3, p)).rad) for p in (64, 128, 256, 512)]
        assert all(b <= a for a, b in zip(radii, radii[1:], strict=False))


class TestLogP:
    """Enclosures of log p(n)"""

    def test_log_p_one_is_zero(self):
        assert log_p_certified(1, 64).is_exact()
        assert log_p_certified(1, 64).contains(0)
        assert log_p_certified(0, 64).contains(0)

    def test_log_p_two(self):
        assert cr_exp(log_p_certified(2, 128)).contains(2)

    def test_log_p_hundred(self):
        value = log_p_certified(100, 128)
        assert float(value) == pytest.approx(math.log(190569292), rel=1e-15)
        assert mpf_to_fraction(value.rad) < Fraction(1, 2**110)


class TestCertifiedComparison:
    """The precision ladder protocol"""

    def test_separated_constants(self):
        assert certified_strict_less(1, 2, SHORT_LADDER) is Verdict.HOLDS
        assert certified_strict_less(2, 1, SHORT_LADDER) is Verdict.FAILS

    def test_identical_sides_undecided(self):
        assert certified_strict_less(1, 1, SHORT_LADDER) is Verdict.UNDECIDED
        assert certified_less_equal(1, 1, SHORT_LADDER) is Verdict.BOUNDARY

    def test_antisymmetry_at_same_rung(self):
        def lhs(p):
            return cr_log(cr_from_int(3, p))

        def rhs(p):
            return cr_div(cr_from_int(11, p), 10)

        # log 3 < 1.1
        forward = certified_comparison(lhs, rhs, SHORT_LADDER)
        backward = certified_comparison(rhs, lhs, SHORT_LADDER)
        assert forward.verdict is Verdict.HOLDS
        assert backward.verdict is Verdict.FAILS
        assert forward.precision == backward.precision

    def test_escalates_until_separated(self):
        gap = Fraction(1, 2**100)
        comparison = certified_comparison(
            lambda p: cr_log(cr_from_int(2, p)),
            lambda p: cr_log(cr_from_int(2, p)) + gap,
            SHORT_LADDER,
        )
        assert comparison.verdict is Verdict.HOLDS
        assert comparison.precision >= 128

    def test_margin_sign_matches_verdict(self):
        comparison = certified_comparison(1, 3, SHORT_LADDER)
        assert comparison.margin.contains(2)

    def test_domain_errors_propagate(self):
        with pytest.raises(DomainError):
            certified_strict_less(lambda p: cr_log(cr_from_int(-1, p)), 0, SHORT_LADDER)

    def test_weakest_prefers_failures(self):
        holds = certified_comparison(0, 1, SHORT_LADDER)
        fails = certified_comparison(1, 0, SHORT_LADDER)
        assert weakest([holds, fails, holds]) is fails
        with pytest.raises(ValueError, match="no comparisons"):
            weakest([])

    def test_ladder_from_start(self):
        assert precision_ladder(128, cap=1024) == (128, 256, 512, 1024)

    @mock.patch.dict(os.environ, {constants.MAX_PRECISION_ENV: "256"})
    def test_env_caps_ladder(self):
        assert max_precision_bits() == 256
        assert precision_ladder() == (64, 128, 256)

    @mock.patch.dict(os.environ, {constants.MAX_PRECISION_ENV: "lots"})
    def test_invalid_env_falls_back(self):
        assert max_precision_bits() == constants.DEFAULT_MAX_PRECISION_BITS

    @mock.patch.dict(os.environ, {constants.MAX_PRECISION_ENV: "8"})
    def test_tiny_env_falls_back(self):
        assert max_precision_bits() == constants.DEFAULT_MAX_PRECISION_BITS


# ─── logpart/special_functions.py ─────────────────────────────────────────


class TestMuAndSeries:
    """μ(n), rising factorials, L_ν and ζ(7/4)"""

    def test_mu_one(self):
        assert float(mu(1, 128)) == pytest.approx(math.pi / 6 * math.sqrt(23), rel=1e-15)

    def test_mu_increasing(self):
        values = [mu(n, 64) for n in range(1, 60)]
        assert all(
            libmp.mpf_gt(b.lower(), a.upper()) for a, b in zip(values, values[1:], strict=False)
        )

    def test_mu_domain(self):
        with pytest.raises(ValueError, match="n >= 1"):
            mu(0, 64)
        with pytest.raises(DomainError):
            mu_at(Fraction(1, 24), 64)

    def test_rising_factorial(self):
        assert rising_factorial(Fraction(1, 2), 3) == Fraction(15, 8)
        assert rising_factorial(5, 0) == 1
        with pytest.raises(ValueError):
            rising_factorial(1, -1)

    def test_bessel_connection(self):
        # I_{1/2}(z) = sqrt(2/(πz))·sinh z, here z = 2
        value = I_nu_from_L(Fraction(1, 2), 1, 128)
        expected = math.sqrt(1 / math.pi) * math.sinh(2)
        assert float(value) == pytest.approx(expected, rel=1e-14)

    def test_l_nu_against_mpmath(self):
        x = Fraction(37, 4)
        value = I_nu_from_L(Fraction(3, 2), x, 128)
        expected = mpmath.besseli(1.5, 2 * mpmath.sqrt(mpmath.mpf(37) / 4))
        assert float(value) == pytest.approx(float(expected), rel=1e-14)

    def test_l_nu_rejects_nonpositive_argument(self):
        with pytest.raises(DomainError):
            I_nu_from_L(Fraction(3, 2), 0, 64)

    def test_zeta_encloses(self):
        zeta = zeta_7_4(64)
        assert zeta.contains(Fraction(str(mpmath.zeta(mpmath.mpf(7) / 4))))
        assert mpf_to_fraction(zeta.rad) < Fraction(1, 10**6)

    def test_zeta_width_shrinks_with_terms(self):
        widths = [mpf_to_fraction(zeta_7_4(64, terms).rad) for terms in (100, 1000, 10_000)]
        assert widths[-1] < Fraction(1, 100)
        assert widths[0] > widths[1] > widths[2]


class TestLambertW:
    """Certified real branches of W"""

    def test_principal_at_one(self):
        result = lambert_w(LambertBranch.PRINCIPAL, 1, 128)
        assert float(result.value) == pytest.approx(0.5671432904097838, rel=1e-15)
        assert result.residual().contains(0)

    def test_minus_one_branch(self):
        result = lambert_w(LambertBranch.MINUS_ONE, Fraction(-1, 10), 128)
        assert float(result.value) == pytest.approx(-3.577152063957297, rel=1e-14)
        assert libmp.mpf_lt(result.value.upper(), libmp.fnone)
        assert result.residual().contains(0)

    def test_principal_branch_at_least_minus_one(self):
        result = lambert_w(LambertBranch.PRINCIPAL, Fraction(-1, 3), 128)
        assert libmp.mpf_ge(result.value.lower(), libmp.fnone)

    def test_principal_at_zero(self):
        result = lambert_w(LambertBranch.PRINCIPAL, 0, 128)
        assert result.value.contains(0)
        assert mpf_to_fraction(result.value.rad) < Fraction(1, 2**100)

    def test_principal_at_e(self):
        e = cr_exp(cr_from_int(1, 128))
        result = lambert_w(LambertBranch.PRINCIPAL, e, 128)
        assert result.value.contains(1)
        assert result.residual().contains(0)

    @pytest.mark.parametrize("branch", list(LambertBranch))
    def test_branch_point(self, branch):
        minus_inv_e = -cr_exp(cr_from_int(-1, 128))
        result = lambert_w(branch, minus_inv_e, 128)
        assert result.value.contains(-1)
        assert mpf_to_fraction(result.value.rad) < Fraction(1, 2**40)

    def test_domain(self):
        with pytest.raises(DomainError, match="-1/e"):
            lambert_w(LambertBranch.PRINCIPAL, -1, 64)
        with pytest.raises(DomainError, match="W_-1"):
            lambert_w(LambertBranch.MINUS_ONE, Fraction(1, 2), 64)


class TestGRoots:
    """Roots of g(x) = −2/(3x²) + 2e^(−(π/10)√(2x/3))"""

    def test_roots_near_published_values(self):
        x1, x2 = solve_g_roots(128)
        assert abs(float(x1) - 0.64) < 0.01
        assert abs(float(x2) - 4996.47) < 0.5

    def test_sign_changes_certified(self):
        for check in g_root_checks(128):
            assert check.crosses
            assert check.sign_change_margin.is_positive()

    def test_g_negative_beyond_second_root(self):
        assert g_function(6000, 64).is_negative()
        assert g_function(100, 64).is_positive()


class TestRatioBounds:
    """Bessel and L_ν ratio bounds"""

    def test_bessel_and_l_ratio_bounds(self):
        results = besseli_ratio_bounds(Fraction(3, 2), 1, 2, SHORT_LADDER)
        assert set(results) == {"bessel_lower", "l_lower", "l_upper"}
        assert {c.verdict for c in results.values()} == {Verdict.HOLDS}

    def test_bounds_need_ordered_points(self):
        with pytest.raises(ValueError, match="0 < x < y"):
            besseli_ratio_bounds(Fraction(3, 2), 2, 1)

    def test_ratios_decrease(self):
        assert {c.verdict for c in l_ratio_decreasing([50, 100, 200], SHORT_LADDER)} == {
            Verdict.HOLDS
        }
        assert {c.verdict for c in tail_ratio_decreasing([50, 100, 200], SHORT_LADDER)} == {
            Verdict.HOLDS
        }

    @staticmethod
    def _random_pairs(rng, count, y_max):
        pairs = []
        while len(pairs) < count:
            x, y = sorted(Fraction(rng.randint(1, 100 * y_max), 100) for _ in range(2))
            if x < y:
                pairs.append((x, y))
        return pairs

    def test_random_pairs_hold(self):
        for x, y in self._random_pairs(random.Random(1715), 50, 200):
            results = besseli_ratio_bounds(Fraction(3, 2), x, y)
            assert {c.verdict for c in results.values()} == {Verdict.HOLDS}, (x, y)

    @slow
    def test_random_pairs_hold_to_ten_thousand(self):
        for x, y in self._random_pairs(random.Random(2024), 50, 10**4):
            results = besseli_ratio_bounds(Fraction(3, 2), x, y)
            assert {c.verdict for c in results.values()} == {Verdict.HOLDS}, (x, y)

    def test_sample_points_must_increase(self):
        with pytest.raises(ValueError, match="increasing"):
            l_ratio_decreasing([100, 50])


# ─── logpart/hrr_terms.py ─────────────────────────────────────────────────


class TestHrrTerms:
    """Summands f1, f2, the tail bound g and the Lehmer enclosure"""

    @pytest.mark.parametrize("n", [1, 10, 57])
    @pytest.mark.parametrize("k", [1, 2])
    def test_series_and_closed_form_agree(self, n, k):
        assert f_k(n, k, 128).overlaps(fk_closed(n, k, 128))

    def test_f2_sign_follows_parity(self):
        assert f_k(10, 2, 64).is_positive()
        assert f_k(11, 2, 64).is_negative()

    def test_only_first_two_summands(self):
        with pytest.raises(ValueError, match="k in"):
            f_k(10, 3, 64)

    def test_f1_dominates(self):
        assert abs(float(f1_closed(100, 128)) - p_exact(100)) < 1e-3 * p_exact(100)

    def test_g_tail_positive(self):
        assert g_tail(50, 64).is_positive()

    def test_lehmer_bound_validation(self):
        with pytest.raises(ValueError, match="truncation"):
            lehmer_bound(10, 0, 64)

    def test_interval_contains_p(self):
        for n in range(1, 301):
            assert hrr_interval(n, 128).contains(p_exact(n)), n

    def test_no_exact_recovery_at_two_terms(self):
        assert hrr_interval(1, 128).recovers_exactly is False
        assert hrr_interval(5000, 128).recovers_exactly is False

    def test_lehmer_check(self):
        assert lehmer_check(100).verdict is Verdict.HOLDS

    def test_term_bundle_checks(self):
        assert [c.label for c in term_bundle_checks(10)] == ["f1_positive", "dominant_gap_positive"]
        assert verdicts(term_bundle_checks(60)) == {Verdict.HOLDS}
        assert len(term_bundle_checks(60)) == 3

    @pytest.mark.parametrize("n", [1, 7, 50, 400])
    def test_ratio_bounds_hold(self, n):
        checks = ratio_bound_checks(n)
        assert verdicts(checks) == {Verdict.HOLDS}
        assert len(checks) == (7 if n >= 50 else 6)

    @staticmethod
    def _f2_over_f1(n):
        return lambda p: cr_div(abs(term_bundle(n, p).f2), term_bundle(n, p).f1)

    @staticmethod
    def _g_over_gap(n):
        return lambda p: cr_div(term_bundle(n, p).g_bound, term_bundle(n, p).dominant_gap)

    @pytest.mark.parametrize("ratio", ["_f2_over_f1", "_g_over_gap"])
    def test_ratios_decrease_on_powers_of_two(self, ratio):
        ratio = getattr(self, ratio)
        grid = [2**j for j in range(13)]
        for a, b in zip(grid, grid[1:], strict=False):
            assert certified_comparison(ratio(b), ratio(a)).verdict is Verdict.HOLDS, (a, b)

    def test_lehmer_relative_error_decreases(self):
        def relative(n):
            return lambda p: cr_div(lehmer_bound(n, 2, p), p_exact(n))

        for a, b in [(10, 100), (100, 1000)]:
            assert certified_comparison(relative(b), relative(a)).verdict is Verdict.HOLDS

    @slow
    def test_term_bundle_checks_to_2000(self):
        for n in range(1, 2001):
            assert verdicts(term_bundle_checks(n)) == {Verdict.HOLDS}, n

    @slow
    def test_lehmer_containment_to_5000(self):
        for n in range(1, 5001):
            assert hrr_interval(n, 256).contains(p_exact(n)), n


# ─── logpart/inequality_lemmas.py ─────────────────────────────────────────


class TestInequalityLemmas:
    """Certified predicates for L1…L7"""

    def test_l1_at_endpoint(self):
        instance = evaluate_lemma(LemmaId.L1, {"x": Fraction(1, 48)})
        assert instance.verdict is Verdict.HOLDS
        assert float(instance.comparison.margin) == pytest.approx(2.9e-4, rel=0.1)

    def test_l3_equality_at_zero(self):
        assert check_lemma(LemmaId.L3, {"x": 0, "alpha": 2}) is Verdict.BOUNDARY

    def test_l4_and_l7(self):
        assert check_lemma(LemmaId.L4, {"x": 1}) is Verdict.HOLDS
        assert check_lemma(LemmaId.L7, {"x": Fraction(1, 1000)}) is Verdict.HOLDS

    @pytest.mark.parametrize("sign", ["+", "-"])
    def test_l6_signs(self, sign):
        assert check_lemma(LemmaId.L6, {"x": Fraction(1, 2), "sign": sign}) is Verdict.HOLDS

    def test_l6_without_sign_checks_both(self):
        assert check_lemma(LemmaId.L6, {"x": Fraction(1, 3)}) is Verdict.HOLDS

    @pytest.mark.parametrize(
        "lemma_id,parameters,message",
        [
            (LemmaId.L1, {"x": Fraction(1, 40)}, "1/48"),
            (LemmaId.L2, {"x": Fraction(1, 2), "c": Fraction(1, 4), "alpha": 1}, "c < 1"),
            (LemmaId.L3, {"x": 1, "alpha": Fraction(1, 3)}, "alpha"),
            (LemmaId.L4, {"x": 0}, "x > 0"),
            (LemmaId.L5, {"x": 1}, "0 < x < 1"),
            (LemmaId.L6, {"x": Fraction(1, 2), "sign": "*"}, "sign"),
        ],
    )
    def test_hypothesis_errors(self, lemma_id, parameters, message):
        with pytest.raises(HypothesisError, match=message):
            evaluate_lemma(lemma_id, parameters)

    def test_missing_parameter(self):
        with pytest.raises(HypothesisError, match="missing"):
            evaluate_lemma(LemmaId.L2, {"x": Fraction(1, 100)})

    @pytest.mark.parametrize("lemma_id", list(LemmaId))
    def test_random_instances_hold(self, lemma_id):
        rng = random.Random(7 + int(lemma_id.value[1]))
        sweep = sweep_lemma(lemma_id, random_instances(lemma_id, 25, rng))
        assert sweep.counts[Verdict.HOLDS] == 25

    @slow
    @pytest.mark.parametrize("lemma_id", list(LemmaId))
    def test_ten_thousand_random_instances(self, lemma_id):
        rng = random.Random(1000 + int(lemma_id.value[1]))
        counts = sweep_lemma(lemma_id, random_instances(lemma_id, 10_000, rng)).counts
        assert counts[Verdict.FAILS] == 0
        assert counts[Verdict.UNDECIDED] == 0

    def test_grid_shapes(self):
        grid = lemma_grid(LemmaId.L2, 1, 100)
        assert grid[-1] == {"x": Fraction(1, 48), "alpha": 2, "c": Fraction(1, 48)}
        assert lemma_grid(LemmaId.L4, 3, 3) == [{"x": Fraction(3, 100)}]
        assert lemma_grid(LemmaId.L3, 1, 1)[0]["alpha"] == Fraction(1, 2)

    def test_grid_sweep_l1(self):
        sweep = sweep_lemma(LemmaId.L1, lemma_grid(LemmaId.L1, 1, 100))
        assert sweep.counts == {Verdict.HOLDS: 100}


# ─── logpart/difference_analysis.py ───────────────────────────────────────


class TestDifferences:
    """D_r(n), p₂(n) and the H_r / G_r split"""

    def test_first_difference_at_one(self):
        assert cr_exp(delta_r_log_p(1, 1, 128).value).contains(2)

    def test_second_difference_at_24(self):
        value = delta_r_log_p(24, 2, 128).value
        expected = cr_log(cr_from_rational(Fraction(1958**2, 1575 * 2436), 160))
        assert value.overlaps(expected)
        assert value.is_negative()

    @pytest.mark.parametrize("n,r", [(50, 1), (100, 2), (333, 4), (500, 6)])
    def test_decomposition_residual(self, n, r):
        value = delta_r_log_p(n, r, 128)
        assert value.residual.contains(0)

    def test_h_r_matches_value_closely(self):
        value = delta_r_log_p(2000, 2, 256)
        assert abs(float(value.g_part)) < 1e-12 * abs(float(value.h_part))

    def test_first_difference_positive(self):
        assert all(delta_r_log_p(n, 1, 64).value.is_positive() for n in range(1, 1001))

    def test_p2_small_values(self):
        assert p2_of_n(2, 128).overlaps(cr_log(cr_from_rational(Fraction(4, 3), 128)))
        assert p2_of_n(1, 128).overlaps(-cr_log(cr_from_int(2, 128)))
        assert p2_of_n(1, 128).is_negative()

    def test_p2_is_shifted_second_difference(self):
        assert p2_of_n(77, 128).overlaps(delta_r_log_p(76, 2, 128).value)

    def test_log_concavity(self):
        assert logconcave_check(25).verdict is Verdict.FAILS
        assert all(logconcave_check(n).verdict is Verdict.HOLDS for n in range(26, 400))

    def test_h_r_domain(self):
        with pytest.raises(ValueError):
            h_r(0, 2, 64)
        with pytest.raises(ValueError, match="order"):
            delta_r_log_p(5, 0, 64)

    @pytest.mark.parametrize("n", [1, 5, 40])
    def test_exact_positivity_matches_certified(self, n):
        for r in range(1, 5):
            certified = delta_r_log_p(n, r, 128).value
            assert log_difference_positive(n, r) == certified.is_positive()


class TestRatioTheorems:
    """Ratio inequalities for p(n) and the Bessenrodt-Ono product"""

    def test_theorem_11(self):
        assert all(verify_theorem_11(n) is Verdict.HOLDS for n in range(2, 1001))

    def test_theorem_12(self):
        assert verify_theorem_12(6) is Verdict.FAILS
        assert all(verify_theorem_12(n) is Verdict.HOLDS for n in range(7, 1001))

    def test_bessenrodt_ono_examples(self):
        assert verify_bessenrodt_ono(2, 2) is Verdict.FAILS
        assert verify_bessenrodt_ono(3, 7) is Verdict.HOLDS
        with pytest.raises(ValueError, match="a, b > 1"):
            verify_bessenrodt_ono(1, 5)

    def test_bessenrodt_ono_range(self):
        assert all(bessenrodt_ono_sum_check(t).verdict is Verdict.HOLDS for t in range(10, 201))
        assert all(a + b <= 9 for a, b in bessenrodt_ono_failures(200))
        assert (2, 2) in bessenrodt_ono_failures(20)


class TestSecondDifferenceBounds:
    """The second-difference conjecture and the chain proving it"""

    def test_conjecture_holds_from_45(self):
        assert all(verify_conjecture_dp(n) is Verdict.HOLDS for n in range(45, 601))

    def test_conjecture_fails_below_45(self):
        failures = [n for n in range(2, 45) if verify_conjecture_dp(n) is Verdict.FAILS]
        assert failures
        assert max(failures) <= 44

    def test_bound_needs_fifty(self):
        with pytest.raises(ValueError, match="n >= 50"):
            desalvo_pak_upper(49, 64)

    @pytest.mark.parametrize("n", [51, 100, 1000])
    def test_chain_below_5000(self, n):
        checks = verify_desalvo_pak_chain(n)
        assert [c.label for c in checks] == ["p2_below_bound", "bound_below_intermediate"]
        assert verdicts(checks) == {Verdict.HOLDS}

    @pytest.mark.parametrize("n", [5000, 5500, 6000])
    def test_chain_from_5000(self, n):
        checks = verify_desalvo_pak_chain(n)
        assert len(checks) == 6
        assert verdicts(checks) == {Verdict.HOLDS}

    def test_target_is_smaller_than_log_bound(self):
        target = desalvo_pak_target(5000, 128)
        assert target.is_positive()

    @slow
    def test_conjecture_45_to_8000(self):
        assert all(verify_conjecture_dp(n) is Verdict.HOLDS for n in range(45, 8001))

    @slow
    def test_bound_50_to_2000(self):
        for n in range(50, 2001):
            assert verify_desalvo_pak_chain(n)[0].verdict is Verdict.HOLDS, n


class TestDerivatives:
    """Closed-form derivatives and the difference sandwich"""

    def test_mu_derivative_at_one(self):
        value = mu_family_derivative(MuFamily.MU, 1, 1, 1, 128)
        assert float(value) == pytest.approx(2 * math.pi / math.sqrt(23), rel=1e-15)

    def test_log_mu_derivative_at_one(self):
        assert mu_family_derivative("log_mu", 1, 1, 1, 128).contains(Fraction(12, 23))

    def test_inverse_power_derivative(self):
        # (1/μ)' = −μ'/μ²
        value = mu_family_derivative(MuFamily.INV_MU_K, 1, 1, 1, 128)
        m = math.pi / 6 * math.sqrt(23)
        assert float(value) == pytest.approx(-(2 * math.pi / math.sqrt(23)) / m**2, rel=1e-14)

    def test_second_derivative_of_mu_sign(self):
        assert mu_family_derivative(MuFamily.MU, 1, 2, 10, 64).is_negative()

    def test_central_difference(self):
        h = Fraction(1, 10**6)
        slope = cr_div(mu_at(100 + h, 128) - mu_at(100 - h, 128), 2 * h)
        derivative = mu_family_derivative(MuFamily.MU, 1, 1, 100, 128)
        assert float(slope) == pytest.approx(float(derivative), rel=1e-6)

    def test_domain(self):
        with pytest.raises(DomainError):
            mu_family_derivative(MuFamily.MU, 1, 1, Fraction(1, 24), 64)
        with pytest.raises(ValueError, match="k >= 1"):
            mu_family_derivative(MuFamily.INV_MU_K, 0, 1, 2, 64)

    @pytest.mark.parametrize("family", list(MuFamily))
    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_sandwich(self, family, r):
        ks = (1, 2, 3) if family is MuFamily.INV_MU_K else (1,)
        for k in ks:
            for n in (50, 200):
                assert verdicts(sandwich_check(family, k, r, n)) == {Verdict.HOLDS}

    @slow
    def test_sandwich_at_1000(self):
        for family in MuFamily:
            for k in (1, 2, 3):
                for r in (1, 2, 3):
                    assert verdicts(sandwich_check(family, k, r, 1000)) == {Verdict.HOLDS}


class TestGBounds:
    """Bounds on G_r from the HRR terms"""

    def test_breakdown_needs_fifty(self):
        with pytest.raises(ValueError, match="n >= 50"):
            g_bound_breakdown(49, 2, 64)

    def test_breakdown_parts_positive(self):
        breakdown = g_bound_breakdown(50, 2, 128)
        for part in (breakdown.bound_F1, breakdown.bound_F2, breakdown.bound_F3, breakdown.F4):
            assert part.is_positive()

    @pytest.mark.parametrize("n,r", [(50, 2), (50, 1), (120, 4), (1000, 5)])
    def test_checks_hold(self, n, r):
        checks = g_bound_checks(n, r)
        assert [c.label for c in checks] == [
            "breakdown_below_5F4",
            "F4_below_envelope",
            "g_part_below_envelope",
        ]
        assert verdicts(checks) == {Verdict.HOLDS}

    @slow
    def test_grid(self):
        for n in range(50, 501):
            for r in range(1, 7):
                assert verdicts(g_bound_checks(n, r)) == {Verdict.HOLDS}, (n, r)
                assert delta_r_log_p(n, r, 128).residual.contains(0)


class TestUpperBound:
    """Upper bound on D_r and its threshold constants"""

    def test_r1_fails_at_one(self):
        assert verify_theorem_31(1, 1) is Verdict.FAILS

    def test_r1_from_12(self):
        assert all(verify_theorem_31(n, 1) is Verdict.HOLDS for n in range(12, 201))

    @pytest.mark.parametrize("n", [200, 450, 3000])
    def test_r1_chain(self, n):
        assert verify_theorem_31_r1_chain(n) is Verdict.HOLDS

    def test_r1_chain_range(self):
        with pytest.raises(ValueError, match="n >= 200"):
            verify_theorem_31_r1_chain(100)

    def test_bound_is_log(self):
        assert u_r_bound(10, 2, 64).is_positive()

    def test_r2_constants(self):
        bundle = threshold_constants(2, ThresholdFamily.THEOREM31)
        assert bundle.family is ThresholdFamily.THEOREM31
        assert lambert_argument_in_domain(bundle.lambert_argument)
        assert bundle.printed_argument_in_domain
        assert bundle.roots_validated
        assert 7 < float(bundle.u_or_m_1) < 10
        assert 140 < float(bundle.u_or_m_2) < 150
        assert 140 <= bundle.n_of_r <= 155
        assert bundle.n_of_r >= 48 * 2 - 3

    def test_u1_formula(self):
        bundle = threshold_constants(3, "thm31")
        total = float(bundle.c1) + float(bundle.c2) + float(bundle.c3)
        assert float(bundle.u_or_m_1) == pytest.approx(4 * total**2 / 4, rel=1e-12)

    def test_constants_validation(self):
        with pytest.raises(ValueError, match="r >= 2"):
            threshold_constants(1, ThresholdFamily.THEOREM31)
        with pytest.raises(ValueError, match="K_max"):
            threshold_constants(2, ThresholdFamily.THEOREM31, k_max=5)

    def test_chain_from_threshold(self):
        n0 = threshold_constants(2, ThresholdFamily.THEOREM31).n_of_r
        for n in range(n0, n0 + 20):
            assert verdicts(theorem_31_chain(n, 2)) == {Verdict.HOLDS}

    def test_h_r_bounds(self):
        checks = verify_h_r_bounds(200, 2)
        assert [c.label for c in checks] == [
            "h_below_upper_bound",
            "h_above_lower_bound",
            "h_above_half_leading",
        ]
        assert verdicts(checks) == {Verdict.HOLDS}

    def test_h_r_bounds_out_of_range(self):
        with pytest.raises(ValueError, match="no H_r bound"):
            verify_h_r_bounds(10, 2)

    @slow
    def test_chain_r2_to_r5(self):
        for r in range(2, 6):
            n0 = threshold_constants(r, ThresholdFamily.THEOREM31).n_of_r
            for n in range(n0, n0 + 201):
                assert verdicts(theorem_31_chain(n, r)) == {Verdict.HOLDS}, (n, r)

    @slow
    def test_r1_to_5000(self):
        assert all(verify_theorem_31(n, 1) is Verdict.HOLDS for n in range(12, 5001))


class TestPositivity:
    """Positivity of D_r and its threshold constants"""

    def test_r1_always(self):
        assert all(verify_theorem_41(n, 1) is Verdict.HOLDS for n in range(1, 300))

    def test_r2_from_25(self):
        assert verify_theorem_41(24, 2) is Verdict.FAILS
        assert all(verify_theorem_41(n, 2) is Verdict.HOLDS for n in range(25, 300))

    def test_r3_constants(self):
        bundle = threshold_constants(3, ThresholdFamily.THEOREM41)
        assert 25 < float(bundle.u_or_m_1) < 35
        assert 195 < float(bundle.u_or_m_2) < 205
        assert 195 <= bundle.n_of_r <= 210
        assert bundle.roots_validated
        assert bundle.lambert_argument is not None
        assert lambert_argument_in_domain(bundle.lambert_argument)

    def test_m1_formula(self):
        bundle = threshold_constants(4, ThresholdFamily.THEOREM41)
        b1, b2, b3 = float(bundle.c1), float(bundle.c2), float(bundle.c3)
        assert float(bundle.u_or_m_1) == pytest.approx(4 * (b2 + b3) ** 2 / b1**2, rel=1e-12)

    def test_sweep_from_threshold(self):
        n0 = threshold_constants(3, ThresholdFamily.THEOREM41).n_of_r
        assert all(verify_theorem_41(n, 3) is Verdict.HOLDS for n in range(n0, n0 + 30))

    @pytest.mark.parametrize("r,expected", [(1, 1), (2, 25)])
    def test_empirical_thresholds(self, r, expected):
        assert empirical_sign_threshold_logp(r, 1000) == expected

    def test_empirical_below_formula_r3(self):
        empirical = empirical_sign_threshold_logp(3, 1000)
        assert empirical is not None
        assert empirical <= threshold_constants(3, ThresholdFamily.THEOREM41).n_of_r

    @slow
    def test_empirical_below_formula_r4_r5(self):
        for r in (4, 5):
            n0 = threshold_constants(r, ThresholdFamily.THEOREM41).n_of_r
            empirical = empirical_sign_threshold_logp(r, 5000)
            assert empirical is not None and empirical <= n0

    @slow
    def test_r3_sweep_200(self):
        n0 = threshold_constants(3, ThresholdFamily.THEOREM41).n_of_r
        assert all(verify_theorem_41(n, 3) is Verdict.HOLDS for n in range(n0, n0 + 201))


# ─── logpart/reports.py ───────────────────────────────────────────────────


class TestReports:
    """Rows, CSV round trip and JSON document"""

    @pytest.fixture
    def report(self):
        rows = [
            ReportRow.from_comparison("conj1.3", n, None, certified_comparison(0, n - 3, (64,)))
            for n in range(1, 6)
        ]
        return Report("conj1.3", 1, 5, rows)

    def test_csv_round_trip(self, report):
        buffer = io.StringIO()
        write_csv(report.rows, buffer)
        assert buffer.getvalue().splitlines()[0] == ",".join(constants.CSV_COLUMNS)
        buffer.seek(0)
        assert read_csv(buffer) == report.rows

    def test_margin_rendering(self, report):
        assert float(report.rows[-1].margin) == 2.0
        assert float(report.rows[-1].radius) == 0.0
        assert report.rows[2].verdict is Verdict.UNDECIDED

    def test_summary_and_exit_code(self, report):
        assert report.summary() == {"Holds": 2, "Fails": 2, "Undecided": 1, "Boundary": 0}
        assert report.failures() == [1, 2]
        assert report.exit_code() == constants.EXIT_FAILURES
        assert Report("x", 1, 1, report.rows[3:]).exit_code() == constants.EXIT_OK

    def test_json_document(self, report):
        document = report_document(report)
        assert set(document) == {"statement", "range", "rows", "summary"}
        assert document["range"] == {"from": "1", "to": "5"}
        assert document["summary"]["Holds"] == "2"

    def test_bad_header_rejected(self):
        with pytest.raises(ValueError, match="header"):
            read_csv(io.StringIO("a,b\n1,2\n"))


# ─── logpart/utils.py ─────────────────────────────────────────────────────


class TestValidators:
    """(is_valid, message) validators"""

    def test_range(self):
        assert validate_range(2, 10) == (True, "ok")
        assert validate_range(10, 2)[0] is False
        assert validate_range(3, 9, minimum=4)[0] is False

    def test_order_and_precision(self):
        assert validate_order(0)[0] is False
        assert validate_precision(16)[0] is False
        assert validate_precision(128)[0] is True

    def test_output_path(self, tmp_path):
        assert validate_output_path(None) == (True, "stdout")
        assert validate_output_path(str(tmp_path))[0] is False
        assert validate_output_path(str(tmp_path / "missing" / "out.csv"))[0] is False
        assert validate_output_path(str(tmp_path / "out.csv"))[0] is True


class TestConfig:
    """JSON configuration loading"""

    def test_missing_file(self, tmp_path):
        assert load_config(tmp_path / "config.json") == {}

    def test_malformed_file(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text("{not json")
        assert load_config(path) == {}

    def test_non_object(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text("[1, 2]")
        assert load_config(path) == {}

    def test_known_keys_only(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"workers": 2, "precision": True, "colour": "red"}))
        assert load_config(path) == {"workers": 2}

    def test_env_wins_over_config(self):
        with mock.patch.dict(os.environ, {constants.MAX_PRECISION_ENV: "512"}):
            apply_config({"max_precision_bits": 256})
            assert os.environ[constants.MAX_PRECISION_ENV] == "512"

    def test_config_sets_cap(self):
        with mock.patch.dict(os.environ, {}, clear=True):
            apply_config({"max_precision_bits": 256})
            assert max_precision_bits() == 256


class TestParallelSweep:
    """Ordered fan-out over worker threads"""

    def test_order_preserved(self):
        assert parallel_sweep(lambda n: n * n, range(50), workers=4) == [n * n for n in range(50)]

    def test_single_worker(self):
        assert parallel_sweep(p_exact, [5, 0], workers=1, table_limit=10) == [7, 1]


# ─── verifier_cli.py ──────────────────────────────────────────────────────


@pytest.fixture
def cli(monkeypatch):
    monkeypatch.setattr(verifier_cli, "_configure_logging", lambda: None)
    monkeypatch.setattr(verifier_cli, "load_config", lambda: {})
    monkeypatch.setattr(sys, "excepthook", sys.excepthook)
    return verifier_cli.main


class TestCli:
    """Command-line surface"""

    @pytest.mark.parametrize("n,expected", [("0", "1"), ("5", "7")])
    def test_partition(self, cli, capsys, n, expected):
        assert cli(["partition", n]) == constants.EXIT_OK
        assert capsys.readouterr().out.strip() == expected

    def test_partition_negative(self, cli):
        assert cli(["partition", "-1"]) == constants.EXIT_USAGE

    def test_verify_failures_exit_one(self, cli, capsys):
        assert cli(["verify", "conj1.3", "--from", "2", "--to", "44"]) == constants.EXIT_FAILURES
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == ",".join(constants.CSV_COLUMNS)
        assert len(lines) == 44
        assert [int(line.split(",")[1]) for line in lines[1:]] == list(range(2, 45))

    def test_verify_all_hold(self, cli, capsys):
        assert cli(["verify", "thm1.1", "--from", "2", "--to", "300"]) == constants.EXIT_OK
        assert "Fails" not in capsys.readouterr().out

    def test_verify_json_to_file(self, cli, tmp_path):
        out = tmp_path / "report.json"
        argv = ["verify", "thm4.1", "--from", "25", "--to", "60", "--r", "2"]
        assert cli([*argv, "--format", "json", "--out", str(out)]) == constants.EXIT_OK
        document = json.loads(out.read_text())
        assert document["statement"] == "thm4.1"
        assert document["summary"]["Holds"] == "36"
        assert document["rows"][0]["r"] == "2"

    def test_verify_lemma(self, cli, capsys):
        assert cli(["verify", "lemma:L4", "--from", "1", "--to", "20"]) == constants.EXIT_OK

    def test_lemma_outside_hypothesis(self, cli):
        assert cli(["verify", "lemma:L1", "--from", "1", "--to", "200"]) == constants.EXIT_USAGE

    @pytest.mark.parametrize(
        "argv",
        [
            ["verify", "thm9.9", "--from", "1", "--to", "2"],
            ["verify", "thm1.1", "--from", "5", "--to", "2"],
            ["verify", "thm3.2", "--from", "10", "--to", "60"],
            ["verify", "roots:g", "--from", "1", "--to", "3"],
            ["--precision", "8", "verify", "thm1.1", "--from", "2", "--to", "3"],
        ],
    )
    def test_usage_errors(self, cli, argv):
        assert cli(argv) == constants.EXIT_USAGE

    @pytest.mark.parametrize(
        "argv",
        [
            ["verify", "thm1.1", "--from", "2", "--to", "3", "--precision", "256"],
            ["verify", "thm1.1", "--from", "2", "--to", "3", "--workers", "1"],
            ["--precision", "64", "verify", "thm1.1", "--from", "2", "--to", "3"],
            ["thresholds", "--r", "2", "--family", "thm31", "--precision", "256"],
            ["roots-g", "--precision", "256"],
        ],
    )
    def test_run_options_on_either_side(self, cli, argv):
        assert cli(argv) == constants.EXIT_OK

    def test_subcommand_precision_overrides_top_level(self):
        parser = verifier_cli.build_parser()
        base = ["--precision", "64", "verify", "thm1.1", "--from", "2", "--to", "3"]
        assert parser.parse_args([*base, "--precision", "512"]).precision == 512
        args = parser.parse_args(base)
        assert args.precision == 64
        assert args.workers == constants.MAX_WORKER_THREADS

    def test_bad_precision_after_subcommand(self, cli):
        argv = ["verify", "thm1.1", "--from", "2", "--to", "3", "--precision", "8"]
        assert cli(argv) == constants.EXIT_USAGE

    def test_unknown_subcommand(self, cli):
        with pytest.raises(SystemExit) as info:
            cli(["frobnicate"])
        assert info.value.code == constants.EXIT_USAGE

    def test_thresholds_json(self, cli, capsys):
        assert cli(["thresholds", "--r", "2", "--family", "thm31"]) == constants.EXIT_OK
        document = json.loads(capsys.readouterr().out)
        assert {"a1", "a2", "a3", "u1", "u2", "n_of_r"} <= set(document)
        assert document["roots_validated"] == "true"

    def test_thresholds_thm41(self, cli, capsys):
        assert cli(["thresholds", "--r", "3", "--family", "thm41"]) == constants.EXIT_OK
        document = json.loads(capsys.readouterr().out)
        assert {"b1", "b2", "b3", "m1", "m2"} <= set(document)

    def test_thresholds_direct_result(self, cli, capsys):
        assert cli(["thresholds", "--r", "1", "--family", "thm41"]) == constants.EXIT_OK
        document = json.loads(capsys.readouterr().out)
        assert "direct" in document and "m1" not in document

    def test_roots_g(self, cli, capsys):
        assert cli(["roots-g"]) == constants.EXIT_OK
        out = capsys.readouterr().out
        assert out.startswith("x1 = ")
        assert "sign change certified" in out

    def test_roots_statement(self, cli, capsys):
        assert cli(["verify", "roots:g", "--from", "1", "--to", "2"]) == constants.EXIT_OK

    @pytest.mark.parametrize("statement", ["lehmer", "ratios", "logconcave", "bo"])
    def test_extra_statements(self, cli, statement):
        assert cli(["verify", statement, "--from", "30", "--to", "60"]) == constants.EXIT_OK
