import csv
import io
import json
import logging
import sys
from typing import Dict, Iterable, Optional

from models.report import Report

logger = logging.getLogger("report_dao")

SWEEP_COLUMNS = (
    "family",
    "n",
    "d",
    "q",
    "linf",
    "lq_pow_q",
    "lq_float",
    "lq_star_lower_pow_q",
    "linf_star",
    "verdicts",
    "margins",
    "runtime",
    "error",
)


class ReportDAO:
    @staticmethod
    def to_json(report: Report) -> str:
        return json.dumps(report.to_dict(), indent=2)

    @staticmethod
    def rows_to_csv(rows: Iterable[Dict[str, str]]) -> str:
        """Sweep rows as CSV text in the fixed column order"""
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({column: row.get(column, "") for column in SWEEP_COLUMNS})
        return buffer.getvalue()

    @staticmethod
    def write_text(text: str, path: Optional[str] = None) -> None:
        """Write to `path`, or to stdout when no path is given"""
        if not path:
            sys.stdout.write(text)
            if not text.endswith("\n"):
                sys.stdout.write("\n")
            return
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
            if not text.endswith("\n"):
                f.write("\n")
        logger.info(f"Wrote {path}")

    @staticmethod
    def save(report: Report, path: Optional[str] = None, fmt: str = "json") -> None:
        """Emit a report: its document (gen), its sweep rows as CSV, or the JSON report"""
        if report.document is not None:
            text = report.document
        elif fmt == "csv":
            text = ReportDAO.rows_to_csv(report.rows)
        else:
            text = ReportDAO.to_json(report)
        ReportDAO.write_text(text, path)
