"""
Base class for all hbinterp report writers.
"""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Optional

from hbinterp.core.models import ExperimentReport


class ReportWriter(ABC):
    """
    Base class for the output formats.

    A writer renders a report to text; write() stores it in a file, or
    returns it unchanged for standard output when no path is given.
    """

    @property
    @abstractmethod
    def format_name(self) -> str:
        """Returns the name of the format."""
        pass

    @property
    @abstractmethod
    def file_extension(self) -> str:
        """Returns the default file extension."""
        pass

    @abstractmethod
    def render(self, report: ExperimentReport) -> str:
        pass

    def write(self, report: ExperimentReport, output_path: Optional[Path] = None) -> str:
        """
        Renders the report and writes it to output_path when given.

        Returns:
            The rendered text
        """
        content = self.render(report)
        if output_path is not None:
            output_path = self.prepare_output_path(Path(output_path))
            output_path.write_text(content, encoding="utf-8")
        return content

    def prepare_output_path(self, output_path: Path) -> Path:
        """Adds the default extension when the path has none and creates the parent directory."""
        if not output_path.suffix:
            output_path = output_path.with_suffix(self.file_extension)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        return output_path
