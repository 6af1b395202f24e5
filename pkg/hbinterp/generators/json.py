"""
JSON report writer.

Output is deterministic: fields in model order, two-space indentation,
shortest round-trip floats and null for non-finite values.
"""

import logging

from hbinterp.core.models import ExperimentReport
from hbinterp.core.serialization import dumps
from hbinterp.generators.base import ReportWriter


logger = logging.getLogger(__name__)


class JsonWriter(ReportWriter):
    @property
    def format_name(self) -> str:
        return "json"

    @property
    def file_extension(self) -> str:
        return ".json"

    def render(self, report: ExperimentReport) -> str:
        return dumps(report.model_dump(mode="json"))
