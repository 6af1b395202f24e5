"""
Tests for the report writers and the Markdown template engine.
"""

import json

import pytest
from jinja2 import TemplateNotFound

from hbinterp.core.config import OutputFormat
from hbinterp.core.models import CarlesonDocument, CoronaReport, DecideReport, ZeroSumDocument
from hbinterp.core.template_engine import TemplateEngine, format_complex, format_number
from hbinterp.generators import CsvWriter, JsonWriter, MarkdownWriter, get_writer
from hbinterp.numerics.families import SeriesClass
from hbinterp.numerics.interpolation import Verdict


@pytest.fixture
def carleson_report():
    return CarlesonDocument(
        kind="carleson",
        version="0.1.0",
        parameters={"seq": "seq.json"},
        delta=0.25,
        separation=0.5,
        argmin_index=0,
        truncations=[1, 2, 3],
        deltas=[1.0, 0.8, 0.25],
    )


@pytest.fixture
def corona_report():
    return CoronaReport(kind="corona", version="0.1.0", delta=0.5, radial=64, angular=64)


@pytest.fixture
def decide_report():
    return DecideReport(
        kind="decide",
        version="0.1.0",
        verdict=Verdict.NOT_INTERPOLATING,
        reason="sum at zeta = 1 diverges",
        carleson_delta=0.3,
        carleson_class=SeriesClass.CONVERGENT,
        carleson_truncations=[1, 2],
        carleson_deltas=[1.0, 0.3],
        sums=[
            ZeroSumDocument(
                zeta=(1.0, 0.0),
                multiplicity=1,
                truncations=[1, 2],
                partial_sums=[1.0, 3.0],
                classification=SeriesClass.DIVERGENT,
            )
        ],
    )


class TestWriters:
    """Tests for JSON, CSV and Markdown output."""

    def test_get_writer(self):
        """One writer per format."""
        assert isinstance(get_writer(OutputFormat.JSON), JsonWriter)
        assert isinstance(get_writer(OutputFormat.CSV), CsvWriter)
        assert isinstance(get_writer("markdown"), MarkdownWriter)
        assert get_writer(OutputFormat.MARKDOWN).file_extension == ".md"

    def test_json(self, carleson_report):
        """JSON reports re-validate into the same model."""
        text = JsonWriter().render(carleson_report)
        data = json.loads(text)
        assert data["kind"] == "carleson"
        assert data["delta"] == 0.25
        assert CarlesonDocument.model_validate(data) == carleson_report

    def test_json_is_deterministic(self, carleson_report):
        """Rendering twice gives identical bytes."""
        assert JsonWriter().render(carleson_report) == JsonWriter().render(carleson_report)

    def test_csv_series(self, carleson_report):
        """One column per series."""
        lines = CsvWriter().render(carleson_report).splitlines()
        assert lines == ["truncation,delta", "1,1.0", "2,0.8", "3,0.25"]

    def test_csv_scalars(self, corona_report):
        """Scalar reports become a single row."""
        lines = CsvWriter().render(corona_report).splitlines()
        assert lines == ["delta,radial,angular", "0.5,64,64"]

    def test_csv_padding(self, decide_report):
        """Shorter columns are padded with empty cells."""
        decide_report.sums[0].partial_sums.append(5.0)
        lines = CsvWriter().render(decide_report).splitlines()
        assert lines[0] == "truncation,carleson_delta,sum_zero_0"
        assert lines[-1] == ",,5.0"

    def test_write_adds_extension(self, tmp_path, corona_report):
        """A path without suffix gets the format extension."""
        content = CsvWriter().write(corona_report, tmp_path / "out" / "corona")
        path = tmp_path / "out" / "corona.csv"
        assert path.exists()
        assert path.read_text(encoding="utf-8") == content

    def test_write_without_path(self, corona_report):
        """No path: the text is only returned."""
        assert JsonWriter().write(corona_report).startswith("{")

    def test_markdown_front_matter(self, carleson_report):
        """Markdown starts with a YAML front matter."""
        text = MarkdownWriter().render(carleson_report)
        assert text.startswith("---\n")
        assert "kind: carleson" in text
        assert "generator: hbinterp" in text
        assert "# hbinterp carleson" in text
        assert "| truncation | delta |" in text
        assert "| 3 | 0.25 |" in text

    def test_markdown_decide(self, decide_report):
        """The decide template shows the verdict and the sums."""
        text = MarkdownWriter().render(decide_report)
        assert "# Interpolation decision" in text
        assert "not interpolating" in text
        assert "zeta = 1 + 0i, m = 1: divergent" in text


class TestTemplateEngine:
    """Tests for the template engine."""

    def test_builtin_templates(self):
        """Generic, decide and simulate templates are built in."""
        assert TemplateEngine().list_builtin_templates() == ["decide", "report", "simulate"]

    def test_fallback(self, corona_report):
        """Kinds without a template use the generic one."""
        engine = TemplateEngine()
        assert engine.template_for(corona_report) == "report"
        assert "| delta | 0.5 |" in engine.render(corona_report)

    def test_custom_directory(self, tmp_path, carleson_report):
        """Templates from a custom directory take precedence."""
        (tmp_path / "carleson").write_text("delta={{ report.delta | num }}\n", encoding="utf-8")
        text = MarkdownWriter(TemplateEngine([tmp_path])).render(carleson_report)
        assert text.endswith("delta=0.25\n")

    def test_unknown_template(self, corona_report):
        """Asking for a missing template raises."""
        with pytest.raises(TemplateNotFound):
            TemplateEngine().render(corona_report, "nope")

    def test_format_number(self):
        """Ten significant digits, n/a for missing values."""
        assert format_number(None) == "n/a"
        assert format_number(1 / 3) == "0.3333333333"
        assert format_number(3) == "3"
        assert format_number(float("inf")) == "inf"

    def test_format_complex(self):
        """[re, im] pairs print as re +- im i."""
        assert format_complex([1.0, -2.0]) == "1 - 2i"
        assert format_complex([0.5, 0.25]) == "0.5 + 0.25i"
        assert format_complex([None, 1.0]) == "n/a"


if __name__ == "__main__":
    pytest.main([__file__])
