"""
CSV report writer.

Writes the plot-ready series of a report: a header row, one series per
column, shorter series padded with empty cells.
"""

import csv
import io
import logging
from typing import Any

from hbinterp.core.models import ExperimentReport
from hbinterp.core.serialization import to_jsonable
from hbinterp.generators.base import ReportWriter


logger = logging.getLogger(__name__)


def _cell(value: Any) -> Any:
    value = to_jsonable(value)
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value


class CsvWriter(ReportWriter):
    @property
    def format_name(self) -> str:
        return "csv"

    @property
    def file_extension(self) -> str:
        return ".csv"

    def render(self, report: ExperimentReport) -> str:
        series = report.series()
        if not series:
            logger.warning(f"Report {report.kind} has no series to write")
        length = max((len(column) for column in series.values()), default=0)

        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(list(series))
        for i in range(length):
            writer.writerow([_cell(col[i]) if i < len(col) else "" for col in series.values()])
        return buffer.getvalue()
