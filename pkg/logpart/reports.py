"""Report rows and their CSV / JSON renderings.

A row's margin is rhs − lhs of the claim in the form lhs < rhs, so a
positive margin whose radius is smaller than it means Holds.
"""

from __future__ import annotations

import csv
import json
import logging
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass, field
from typing import TextIO

from constants import CSV_COLUMNS, EXIT_FAILURES, EXIT_OK
from logpart.precision_core import Comparison, Verdict

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReportRow:
    statement_id: str
    n: int
    r: int | None
    margin: str
    radius: str
    verdict: Verdict

    @classmethod
    def from_comparison(
        cls, statement_id: str, n: int, r: int | None, comparison: Comparison
    ) -> ReportRow:
        return cls(
            statement_id,
            n,
            r,
            comparison.margin.mid_str(),
            comparison.margin.rad_str(),
            comparison.verdict,
        )

    def as_record(self) -> dict[str, str]:
        return {
            "statement_id": self.statement_id,
            "n": str(self.n),
            "r": "" if self.r is None else str(self.r),
            "margin": self.margin,
            "radius": self.radius,
            "verdict": str(self.verdict),
        }

    @classmethod
    def from_record(cls, record: dict[str, str]) -> ReportRow:
        r = record["r"]
        return cls(
            record["statement_id"],
            int(record["n"]),
            int(r) if r else None,
            record["margin"],
            record["radius"],
            Verdict(record["verdict"]),
        )


@dataclass
class Report:
    statement: str
    n_from: int
    n_to: int
    rows: list[ReportRow] = field(default_factory=list)

    def summary(self) -> dict[str, int]:
        counts = Counter(row.verdict for row in self.rows)
        return {str(verdict): counts.get(verdict, 0) for verdict in Verdict}

    @property
    def clean(self) -> bool:
        """No Fails and no Undecided rows."""
        return not any(row.verdict in (Verdict.FAILS, Verdict.UNDECIDED) for row in self.rows)

    def exit_code(self) -> int:
        return EXIT_OK if self.clean else EXIT_FAILURES

    def failures(self) -> list[int]:
        return [row.n for row in self.rows if row.verdict is Verdict.FAILS]


def write_csv(rows: Iterable[ReportRow], stream: TextIO) -> None:
    writer = csv.DictWriter(stream, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.as_record())


def read_csv(stream: TextIO) -> list[ReportRow]:
    reader = csv.DictReader(stream)
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header: {reader.fieldnames}")
    return [ReportRow.from_record(record) for record in reader]


def report_document(report: Report) -> dict:
    return {
        "statement": report.statement,
        "range": {"from": str(report.n_from), "to": str(report.n_to)},
        "rows": [row.as_record() for row in report.rows],
        "summary": {key: str(value) for key, value in report.summary().items()},
    }


def write_json(report: Report, stream: TextIO) -> None:
    json.dump(report_document(report), stream, indent=2)
    stream.write("\n")


def summary_line(report: Report) -> str:
    counts = ", ".join(f"{key}={value}" for key, value in report.summary().items())
    return f"{report.statement} [{report.n_from}, {report.n_to}]: {counts}"
