#!/usr/bin/env python3
"""logpart command line: certified checks of finite differences of log p(n)."""

from __future__ import annotations

import argparse
import json
import logging
import logging.handlers
import os
import sys
from collections.abc import Callable
from contextlib import nullcontext

from constants import (
    APP_DATA_DIR,
    APP_VERSION,
    CLI_START_PRECISION,
    EXIT_FAILURES,
    EXIT_OK,
    EXIT_USAGE,
    LOG_FILE,
    LOG_MAX_BYTES,
    MAX_WORKER_THREADS,
    RATIO_BOUNDS_MIN_N,
    THRESHOLD_PRECISION,
)
from logpart.difference_analysis import (
    ThresholdFamily,
    bessenrodt_ono_sum_check,
    conjecture_dp_check,
    g_bound_checks,
    logconcave_check,
    theorem_11_check,
    theorem_12_check,
    theorem_31_check,
    theorem_41_check,
    threshold_constants,
)
from logpart.hrr_terms import lehmer_check, ratio_bound_checks, term_bundle_checks
from logpart.inequality_lemmas import HypothesisError, LemmaId, evaluate_lemma, lemma_grid
from logpart.partition_oracle import p_exact
from logpart.precision_core import Comparison, Verdict, precision_ladder, weakest
from logpart.reports import Report, ReportRow, summary_line, write_csv, write_json
from logpart.special_functions import g_root_checks
from logpart.utils import (
    apply_config,
    load_config,
    parallel_sweep,
    validate_order,
    validate_output_path,
    validate_precision,
    validate_range,
)

logger = logging.getLogger(__name__)


def _configure_logging() -> None:
    APP_DATA_DIR.mkdir(parents=True, exist_ok=True, mode=0o700)

    # log file is owner-only; create it before the handler opens it
    if not LOG_FILE.exists():
        old_umask = os.umask(0o177)
        try:
            LOG_FILE.touch(mode=0o600)
        finally:
            os.umask(old_umask)

    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[
            logging.handlers.RotatingFileHandler(LOG_FILE, maxBytes=LOG_MAX_BYTES, backupCount=0),
            logging.StreamHandler(),
        ],
    )


def _excepthook(exc_type, exc_value, exc_tb):
    """Log unhandled exceptions to the log file before crashing."""
    logger.critical("Unhandled exception", exc_info=(exc_type, exc_value, exc_tb))
    sys.__excepthook__(exc_type, exc_value, exc_tb)


class UsageError(Exception):
    """Bad command-line input; reported on stderr with exit code 2."""


# ===================================================================
#  Statements
# ===================================================================

Check = Callable[[int], Comparison]


def _labeled_weakest(checks) -> Comparison:
    return weakest([check.comparison for check in checks])


def _root_comparison(index: int, precision: int) -> Comparison:
    check = g_root_checks(precision)[index - 1]
    margin = check.sign_change_margin
    if margin.is_positive():
        verdict = Verdict.HOLDS
    elif margin.is_negative():
        verdict = Verdict.FAILS
    else:
        verdict = Verdict.UNDECIDED
    return Comparison(verdict, margin, precision)


# statement id -> (smallest n, uses r)
_STATEMENTS: dict[str, tuple[int, bool]] = {
    "thm1.1": (1, False),
    "thm1.2": (1, False),
    "conj1.3": (1, False),
    "thm3.1": (1, True),
    "thm3.2": (RATIO_BOUNDS_MIN_N, True),
    "thm4.1": (1, True),
    "bo": (4, False),
    "roots:g": (1, False),
    "logconcave": (1, False),
    "lehmer": (1, False),
    "ratios": (1, False),
    **{f"lemma:{lemma_id}": (0, False) for lemma_id in LemmaId},
}


def statement_check(statement: str, r: int, precision: int) -> Check:
    """Per-n check for a statement id; raises UsageError for unknown ids."""
    if statement not in _STATEMENTS:
        raise UsageError(f"unknown statement {statement!r}; known: {', '.join(_STATEMENTS)}")
    if statement.startswith("lemma:"):
        lemma_id = LemmaId(statement.split(":", 1)[1])

        def lemma_check(n: int) -> Comparison:
            point = lemma_grid(lemma_id, n, n)[0]
            return evaluate_lemma(lemma_id, point, precision).comparison

        return lemma_check

    checks: dict[str, Check] = {
        "thm1.1": lambda n: theorem_11_check(n, precision),
        "thm1.2": lambda n: theorem_12_check(n, precision),
        "conj1.3": lambda n: conjecture_dp_check(n, precision),
        "thm3.1": lambda n: theorem_31_check(n, r, precision),
        "thm3.2": lambda n: _labeled_weakest(g_bound_checks(n, r, precision)),
        "thm4.1": lambda n: theorem_41_check(n, r, precision),
        "bo": lambda n: bessenrodt_ono_sum_check(n, precision),
        "roots:g": lambda n: _root_comparison(n, precision),
        "logconcave": lambda n: logconcave_check(n, precision),
        "lehmer": lambda n: lehmer_check(n, precision),
        "ratios": lambda n: _labeled_weakest(
            term_bundle_checks(n, precision_ladder(precision))
            + ratio_bound_checks(n, precision_ladder(precision))
        ),
    }
    return checks[statement]


def _check_statement_range(statement: str, n_from: int, n_to: int, r: int) -> None:
    minimum, uses_r = _STATEMENTS[statement]
    ok, message = validate_range(n_from, n_to, minimum)
    if ok and statement == "roots:g" and n_to > 2:
        ok, message = False, "roots:g has rows n = 1 and n = 2 only"
    if ok and uses_r:
        ok, message = validate_order(r)
    if not ok:
        raise UsageError(message)


# ===================================================================
#  Commands
# ===================================================================


def cmd_partition(args: argparse.Namespace) -> int:
    if args.n < 0:
        raise UsageError(f"partition needs n >= 0, got {args.n}")
    print(p_exact(args.n))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    statement = args.statement
    check = statement_check(statement, args.r, args.precision)
    _check_statement_range(statement, args.n_from, args.n_to, args.r)
    uses_r = _STATEMENTS[statement][1]

    def row(n: int) -> ReportRow:
        return ReportRow.from_comparison(statement, n, args.r if uses_r else None, check(n))

    logger.info(f"Verifying {statement} on [{args.n_from}, {args.n_to}] from {args.precision} bits")
    try:
        rows = parallel_sweep(
            row,
            range(args.n_from, args.n_to + 1),
            workers=args.workers,
            table_limit=args.n_to + args.r + 2,
        )
    except HypothesisError as e:
        raise UsageError(str(e)) from e

    report = Report(statement, args.n_from, args.n_to, rows)
    with open(args.out, "w", newline="") if args.out else nullcontext(sys.stdout) as stream:
        if args.format == "json":
            write_json(report, stream)
        else:
            write_csv(report.rows, stream)
    logger.info(summary_line(report))
    if report.failures():
        logger.info(f"{statement}: Fails at n = {report.failures()}")
    return report.exit_code()


def _ball(value) -> dict[str, str]:
    return {"mid": value.mid_str(), "rad": value.rad_str()}


def cmd_thresholds(args: argparse.Namespace) -> int:
    family = ThresholdFamily(args.family)
    if family is ThresholdFamily.THEOREM41 and args.r in (1, 2):
        direct = {
            1: "positive for all n >= 1 (p is strictly increasing)",
            2: "positive for all n >= 25 (p is log-concave for n > 25)",
        }[args.r]
        print(json.dumps({"family": str(family), "r": str(args.r), "direct": direct}, indent=2))
        return EXIT_OK
    if family is ThresholdFamily.THEOREM31 and args.r == 1:
        direct = "checked directly for 12 <= n <= 200 and by the analytic chain from n = 200"
        print(json.dumps({"family": str(family), "r": "1", "direct": direct}, indent=2))
        return EXIT_OK
    ok, message = validate_order(args.r)
    if not ok:
        raise UsageError(message)

    precision = max(args.precision, THRESHOLD_PRECISION)
    constants = threshold_constants(args.r, family, precision=precision)
    names = ("a", "u") if family is ThresholdFamily.THEOREM31 else ("b", "m")
    document = {
        "family": str(family),
        "r": str(args.r),
        f"{names[0]}1": _ball(constants.c1),
        f"{names[0]}2": _ball(constants.c2),
        f"{names[0]}3": _ball(constants.c3),
        f"{names[1]}1": _ball(constants.u_or_m_1),
        f"{names[1]}2": _ball(constants.u_or_m_2),
        "n_of_r": str(constants.n_of_r),
        "lambert_argument": _ball(constants.lambert_argument),
        "printed_lambert_argument": _ball(constants.printed_lambert_argument),
        "printed_argument_in_domain": str(constants.printed_argument_in_domain).lower(),
        "roots_validated": str(constants.roots_validated).lower(),
    }
    print(json.dumps(document, indent=2))
    return EXIT_OK if constants.roots_validated else EXIT_FAILURES


def cmd_roots_g(args: argparse.Namespace) -> int:
    checks = g_root_checks(args.precision)
    for check in checks:
        status = "sign change certified" if check.crosses else "sign change NOT certified"
        print(
            f"x{check.index} = {check.root.mid_str()} ± {check.root.rad_str(3)}"
            f"  (delta = {check.half_width.mid_str(3)}, {status})"
        )
    return EXIT_OK if all(check.crosses for check in checks) else EXIT_FAILURES


# ===================================================================
#  Entry point
# ===================================================================


def _add_run_options(parser: argparse.ArgumentParser, precision, workers) -> None:
    parser.add_argument(
        "--precision",
        type=int,
        default=precision,
        help="first rung of the precision ladder, in bits",
    )
    parser.add_argument("--workers", type=int, default=workers)


def build_parser(config: dict | None = None) -> argparse.ArgumentParser:
    config = config or {}
    parser = argparse.ArgumentParser(
        prog="logpart", description="Certified checks on finite differences of log p(n)."
    )
    parser.add_argument("--version", action="version", version=f"logpart {APP_VERSION}")
    _add_run_options(
        parser,
        config.get("precision", CLI_START_PRECISION),
        config.get("workers", MAX_WORKER_THREADS),
    )
    # the same flags after the subcommand override the top-level ones
    run_options = argparse.ArgumentParser(add_help=False)
    _add_run_options(run_options, argparse.SUPPRESS, argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    partition = sub.add_parser("partition", parents=[run_options], help="print p(N)")
    partition.add_argument("n", type=int)
    partition.set_defaults(handler=cmd_partition)

    verify = sub.add_parser(
        "verify", parents=[run_options], help="check a statement over a range of n"
    )
    verify.add_argument("statement")
    verify.add_argument("--from", dest="n_from", type=int, required=True)
    verify.add_argument("--to", dest="n_to", type=int, required=True)
    verify.add_argument("--r", type=int, default=1)
    verify.add_argument("--format", choices=("csv", "json"), default="csv")
    verify.add_argument("--out", default=None)
    verify.set_defaults(handler=cmd_verify)

    thresholds = sub.add_parser(
        "thresholds", parents=[run_options], help="threshold constants for one r"
    )
    thresholds.add_argument("--r", type=int, required=True)
    thresholds.add_argument(
        "--family", choices=[str(f) for f in ThresholdFamily], required=True
    )
    thresholds.set_defaults(handler=cmd_thresholds)

    roots = sub.add_parser("roots-g", parents=[run_options], help="certified roots of g")
    roots.set_defaults(handler=cmd_roots_g)
    return parser


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    sys.excepthook = _excepthook
    config = load_config()
    apply_config(config)
    args = build_parser(config).parse_args(argv)

    for ok, message in (
        validate_precision(args.precision),
        validate_output_path(getattr(args, "out", None)),
    ):
        if not ok:
            print(f"error: {message}", file=sys.stderr)
            return EXIT_USAGE
    if args.workers < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return EXIT_USAGE

    try:
        return args.handler(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
