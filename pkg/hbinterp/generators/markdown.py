"""
Markdown report writer.

Renders the report through the template engine and prepends a YAML front
matter block with the report kind and version.
"""

import logging
from typing import Optional

import yaml

from hbinterp.core.models import ExperimentReport
from hbinterp.core.template_engine import TemplateEngine
from hbinterp.generators.base import ReportWriter


logger = logging.getLogger(__name__)


class MarkdownWriter(ReportWriter):
    """Writer for Markdown summaries."""

    def __init__(self, engine: Optional[TemplateEngine] = None) -> None:
        self.engine = engine or TemplateEngine()

    @property
    def format_name(self) -> str:
        return "markdown"

    @property
    def file_extension(self) -> str:
        return ".md"

    def render(self, report: ExperimentReport) -> str:
        content = self.engine.render(report)
        return self._add_metadata(content, report)

    def _add_metadata(self, content: str, report: ExperimentReport) -> str:
        if content.strip().startswith("---"):
            return content
        metadata = {"kind": report.kind, "generator": "hbinterp", "version": report.version}
        front_matter = yaml.safe_dump(metadata, default_flow_style=False, allow_unicode=True, sort_keys=False)
        return f"---\n{front_matter}---\n\n{content}"
