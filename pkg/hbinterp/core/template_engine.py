"""
Jinja2 template engine for Markdown reports.

Built-in templates are keyed by report kind, with a generic "report"
template as fallback. Custom template directories take precedence over the
built-in ones.
"""

import logging
import math
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import jinja2
from jinja2 import BaseLoader, Environment, FileSystemLoader, TemplateNotFound

from hbinterp.core.models import ExperimentReport


logger = logging.getLogger(__name__)


_GENERIC = """# hbinterp {{ report.kind }}

{% if parameters %}
## Parameters

| Name | Value |
|---|---|
{% for key, value in parameters.items() %}
| {{ key }} | `{{ value }}` |
{% endfor %}
{% endif %}

## Results

| Quantity | Value |
|---|---|
{% for key, value in scalars.items() %}
| {{ key }} | {{ value | num }} |
{% endfor %}
{% if rows %}

## Series

| {{ columns | join(" | ") }} |
|{% for _ in columns %}---|{% endfor %}

{% for row in rows %}
| {{ row | map("num") | join(" | ") }} |
{% endfor %}
{% endif %}
"""

_DECIDE = """# Interpolation decision

**Verdict:** {{ report.verdict.value | verdict_badge }} {{ report.verdict.value }}

{{ report.reason }}

## Carleson condition

- delta: {{ report.carleson_delta | num }}
- family classification: {{ report.carleson_class.value }}

| Truncation | delta |
|---|---|
{% for n, d in report.carleson_truncations | zip(report.carleson_deltas) %}
| {{ n }} | {{ d | num }} |
{% endfor %}

## Sums at the boundary zeros

{% for s in report.sums %}
- zeta = {{ s.zeta | cnum }}, m = {{ s.multiplicity }}: {{ s.classification.value }}
  (last partial sum {{ s.partial_sums[-1] | num if s.partial_sums else "n/a" }})
{% endfor %}
"""

_SIMULATE = """# 0-1 law experiment

- M = {{ report.result.M }}, {{ report.result.trials }} trials, master seed {{ report.result.master_seed }}
- threshold: {{ report.result.threshold | num }}
- regime: {{ report.result.regime.value }}
- median change over the last doubling: {{ report.result.median_change | num }}

| Truncation | Exceedance fraction | Median |
|---|---|---|
{% for t, f, m in report.result.truncations | zip(report.result.exceedance_fractions, report.result.medians) %}
| {{ t }} | {{ f | num }} | {{ m | num }} |
{% endfor %}
"""


class BuiltinTemplateLoader(BaseLoader):
    """Loader for the built-in report templates."""

    def __init__(self) -> None:
        self.templates = {
            "report": _GENERIC,
            "decide": _DECIDE,
            "simulate": _SIMULATE,
        }

    def get_source(self, environment: Environment, template: str) -> Tuple[str, None, Callable[[], bool]]:
        if template not in self.templates:
            raise TemplateNotFound(template)
        return self.templates[template], None, lambda: True

    def list_templates(self) -> List[str]:
        return sorted(self.templates)


def format_number(value: Any, digits: int = 10) -> str:
    """Floats with `digits` significant digits; everything else unchanged."""
    if value is None:
        return "n/a"
    if isinstance(value, bool) or not isinstance(value, float):
        return str(value)
    if not math.isfinite(value):
        return str(value)
    return f"{value:.{digits}g}"


def format_complex(value: Any, digits: int = 10) -> str:
    if value is None or value[0] is None or value[1] is None:
        return "n/a"
    re, im = value
    sign = "-" if im < 0 else "+"
    return f"{re:.{digits}g} {sign} {abs(im):.{digits}g}i"


def verdict_badge(verdict: str) -> str:
    return {"interpolating": "✅", "interpolating (finite)": "✅", "not interpolating": "❌"}.get(verdict, "⚠️")


class TemplateEngine:
    """Renders reports to Markdown."""

    def __init__(self, template_dirs: Optional[List[Path]] = None) -> None:
        self.template_dirs = template_dirs or []
        loaders: List[BaseLoader] = [
            FileSystemLoader(str(d)) for d in self.template_dirs if d.exists()
        ]
        loaders.append(BuiltinTemplateLoader())

        self.env = Environment(
            loader=jinja2.ChoiceLoader(loaders),
            autoescape=False,
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
        )
        self.env.filters["num"] = format_number
        self.env.filters["cnum"] = format_complex
        self.env.filters["verdict_badge"] = verdict_badge
        self.env.filters["zip"] = lambda first, *rest: list(zip(first, *rest))

    def template_for(self, report: ExperimentReport) -> str:
        return report.kind if self.has_template(report.kind) else "report"

    def context(self, report: ExperimentReport) -> Dict[str, Any]:
        series = report.series()
        columns = list(series)
        length = max((len(v) for v in series.values()), default=0)
        rows = [[col[i] if i < len(col) else None for col in series.values()] for i in range(length)]
        if length <= 1:
            rows = []
        return {
            "report": report,
            "parameters": report.parameters,
            "scalars": report.scalars(),
            "columns": columns,
            "rows": rows,
        }

    def render(self, report: ExperimentReport, template_name: Optional[str] = None) -> str:
        """
        Renders a report.

        Raises:
            TemplateNotFound: the requested template does not exist
        """
        name = template_name or self.template_for(report)
        try:
            template = self.env.get_template(name)
        except TemplateNotFound:
            logger.error(f"Template not found: {name}")
            raise
        rendered = template.render(**self.context(report))
        logger.debug(f"Template {name} rendered for {report.kind}")
        return rendered

    def has_template(self, template_name: str) -> bool:
        try:
            self.env.get_template(template_name)
            return True
        except TemplateNotFound:
            return False

    def list_builtin_templates(self) -> List[str]:
        return BuiltinTemplateLoader().list_templates()
