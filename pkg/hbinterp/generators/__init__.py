"""Report writers, one per output format."""

from typing import Dict

from hbinterp.core.config import OutputFormat
from hbinterp.generators.base import ReportWriter
from hbinterp.generators.csv import CsvWriter
from hbinterp.generators.json import JsonWriter
from hbinterp.generators.markdown import MarkdownWriter


def get_writer(output_format: OutputFormat) -> ReportWriter:
    writers: Dict[OutputFormat, ReportWriter] = {
        OutputFormat.JSON: JsonWriter(),
        OutputFormat.CSV: CsvWriter(),
        OutputFormat.MARKDOWN: MarkdownWriter(),
    }
    return writers[OutputFormat(output_format)]


__all__ = ["ReportWriter", "JsonWriter", "CsvWriter", "MarkdownWriter", "get_writer"]
