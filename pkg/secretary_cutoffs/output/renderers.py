"""
Text, CSV and JSON rendering of results
"""

import csv
import io
import json
import numbers
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

from secretary_cutoffs.models import PowerLawFit, RunManifest, SweepRecord

SIGNIFICANT_DIGITS = 12
FORMATS = ("text", "csv", "json")


def format_float(value: Optional[float]) -> str:
    """12 significant digits, '.' decimal separator, empty for None"""
    if value is None:
        return ""
    return format(value, f".{SIGNIFICANT_DIGITS}g")


def to_plain(value: Any) -> Any:
    """JSON-ready copy: floats rounded to 12 significant digits, enums by value, tuples as lists"""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, numbers.Real):
        return float(format_float(float(value)))
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(key): to_plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    return str(value)


class ResultRenderer:
    """Render rows of named columns as an aligned table, CSV, or a JSON document with manifest"""

    def __init__(self, output_format: str = "text"):
        if output_format not in FORMATS:
            raise ValueError(f"Unknown output format: {output_format}")
        self.output_format = output_format

    def render(self, columns: Sequence[str], rows: Sequence[Dict[str, Any]], manifest: RunManifest, summary: Optional[Dict[str, Any]] = None) -> str:
        if self.output_format == "json":
            document = {"manifest": manifest.to_dict(), "results": [{column: row.get(column) for column in columns} for row in rows]}
            if summary:
                document["summary"] = summary
            return self.render_json(document)
        if self.output_format == "csv":
            return self.render_csv(columns, rows)
        return self.render_text(columns, rows, summary)

    @staticmethod
    def render_json(document: Dict[str, Any]) -> str:
        return json.dumps(to_plain(document), indent=2, sort_keys=True) + "\n"

    @staticmethod
    def render_csv(columns: Sequence[str], rows: Sequence[Dict[str, Any]]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([ResultRenderer._cell(row.get(column), empty="") for column in columns])
        return buffer.getvalue()

    @staticmethod
    def render_text(columns: Sequence[str], rows: Sequence[Dict[str, Any]], summary: Optional[Dict[str, Any]] = None) -> str:
        table = [list(columns)] + [[ResultRenderer._cell(row.get(column), empty="-") for column in columns] for row in rows]
        widths = [max(len(line[i]) for line in table) for i in range(len(columns))]
        lines = ["  ".join(cell.rjust(width) for cell, width in zip(line, widths)).rstrip() for line in table]
        for key, value in (summary or {}).items():
            lines.append(f"# {key}: {ResultRenderer._cell(value, empty='-')}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def _cell(value: Any, empty: str) -> str:
        if value is None:
            return empty
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, float):
            return format_float(value)
        if isinstance(value, Enum):
            return str(value.value)
        return str(value)


class SweepCsvWriter:
    """Sweep CSV: fixed header, one row per record, fit footer"""

    HEADER = ("objective", "n", "c_opt", "value", "bound", "exponent_running")

    @staticmethod
    def render(records: Sequence[SweepRecord], running_exponents: Sequence[Optional[float]], fit: Optional[PowerLawFit], fit_error: Optional[str] = None) -> str:
        rows: List[Dict[str, Any]] = [
            {
                "objective": record.objective,
                "n": record.n,
                "c_opt": record.c_opt,
                "value": record.value,
                "bound": record.bound,
                "exponent_running": exponent,
            }
            for record, exponent in zip(records, running_exponents)
        ]
        text = ResultRenderer.render_csv(SweepCsvWriter.HEADER, rows)
        if fit is not None:
            text += (
                f"# fit exponent={format_float(fit.exponent)} log_intercept={format_float(fit.log_intercept)} "
                f"r_squared={format_float(fit.r_squared)} points={fit.points}\n"
            )
        else:
            text += f"# fit unavailable: {fit_error or 'no fit'}\n"
        return text
