"""
Tests for the task registry and the job runner.
"""

import json
from typing import Any, Dict, List

import pytest

from hbinterp.core.config import HbConfig, OutputFormat, SimulationConfig
from hbinterp.core.errors import DomainError
from hbinterp.core.models import CoronaReport, ExperimentReport
from hbinterp.core.runner import JobConfig, JobRunner
from hbinterp.core.serialization import dumps, encode_pair
from hbinterp.core.task_base import TaskBase, TaskCategory
from hbinterp.core.task_registry import TaskRegistry
from hbinterp.numerics.families import SeriesClass


ALL_TASKS = [
    "add-point",
    "blaschke",
    "carleson",
    "construct",
    "corona",
    "decide",
    "dnorm",
    "dyadic",
    "exceedance",
    "gram",
    "mate",
    "membership",
    "np-solve",
    "pair-from-mate",
    "simulate",
    "three-series",
    "verify-pair",
]


class ConstantTask(TaskBase):
    """Plugin-style task used by the registry tests."""

    @property
    def category(self) -> TaskCategory:
        return TaskCategory.PAIR

    @property
    def name(self) -> str:
        return "constant"

    @property
    def description(self) -> str:
        return "Always the same corona report"

    @property
    def required_params(self) -> List[str]:
        return ["level"]

    def run(self, params: Dict[str, Any], config: HbConfig) -> ExperimentReport:
        return self.make_report(CoronaReport, params, delta=float(params["level"]), radial=2, angular=4)


@pytest.fixture
def runner():
    return JobRunner(HbConfig(simulation=SimulationConfig(threads=1)), TaskRegistry())


class TestTaskRegistry:
    """Tests for task discovery."""

    def test_builtin_tasks(self):
        """Every subcommand has a task."""
        assert TaskRegistry().list_task_names() == ALL_TASKS

    def test_categories(self):
        """Tasks are grouped by numerical module."""
        registry = TaskRegistry()
        random_tasks = {task.name for task in registry.list_tasks_by_category("random")}
        assert random_tasks == {"simulate", "three-series", "dyadic", "exceedance"}
        assert registry.list_tasks_by_category("astrology") == []

    def test_unknown_task(self):
        """Unknown names list the available tasks."""
        with pytest.raises(ValueError, match="Available tasks"):
            TaskRegistry().get_task("interpolate")

    def test_task_info(self):
        """Info exposes the required and input parameters."""
        info = TaskRegistry().get_task_info("decide")
        assert info["category"] == "interpolation"
        assert info["required"] == ["pair", "seq"]
        assert info["inputs"] == ["pair", "seq"]

    def test_register_custom(self):
        """External tasks can be registered."""
        registry = TaskRegistry(load_builtin=False)
        registry.register_task(ConstantTask)
        assert registry.has_task("constant")
        assert registry.get_task("constant") is registry.get_task("constant")
        assert str(registry.get_task("constant")) == "constant (pair)"

    def test_register_invalid(self):
        """Only TaskBase subclasses are accepted."""
        with pytest.raises(ValueError):
            TaskRegistry(load_builtin=False).register_task(dict)

    def test_clear(self):
        """clear empties the registry."""
        registry = TaskRegistry()
        registry.clear()
        assert registry.list_tasks() == []


class TestJobRunner:
    """Tests for job execution."""

    def test_run_carleson(self, runner, write_json):
        """A job returns the task report."""
        seq = write_json("seq.json", {"points": [0.0, 0.5, -0.5]})
        report = runner.run(JobConfig(subcommand="carleson", params={"seq": str(seq)}))
        assert report.kind == "carleson"
        assert report.delta == pytest.approx(0.25)
        assert report.parameters == {"seq": str(seq)}
        assert runner.last_duration is not None

    def test_execute_to_file(self, runner, write_json, tmp_path):
        """The report is written with the format extension."""
        seq = write_json("seq.json", {"points": [0.0, 0.5, -0.5]})
        job = JobConfig(subcommand="carleson", params={"seq": str(seq)}, out=tmp_path / "reports" / "carleson")
        _, content = runner.execute(job)
        written = tmp_path / "reports" / "carleson.json"
        assert written.read_text(encoding="utf-8") == content
        assert json.loads(content)["argmin_index"] == 0

    def test_csv_format(self, runner, write_json):
        """Jobs choose their output format."""
        seq = write_json("seq.json", {"points": [0.0, 0.5, -0.5]})
        job = JobConfig(subcommand="carleson", params={"seq": str(seq)}, format=OutputFormat.CSV)
        _, content = runner.execute(job)
        assert content.splitlines()[0] == "truncation,delta"

    def test_unknown_task(self, runner):
        """Unknown subcommands are domain errors."""
        with pytest.raises(DomainError):
            runner.run(JobConfig(subcommand="interpolate"))

    def test_missing_parameter(self, runner):
        """Required parameters are checked before running."""
        with pytest.raises(DomainError, match="Missing parameter: seq"):
            runner.run(JobConfig(subcommand="carleson"))

    def test_missing_input_file(self, runner, tmp_path):
        """Input files must exist."""
        with pytest.raises(DomainError, match="Input file not found"):
            runner.run(JobConfig(subcommand="carleson", params={"seq": str(tmp_path / "absent.json")}))

    def test_custom_task(self):
        """A runner works with any registry."""
        registry = TaskRegistry(load_builtin=False)
        registry.register_task(ConstantTask)
        report = JobRunner(registry=registry).run(JobConfig(subcommand="constant", params={"level": 0.5}))
        assert report.delta == 0.5
        assert report.parameters == {"level": 0.5}

    def test_pair_from_zeros(self, runner):
        """pair-from-mate accepts boundary zeros instead of a file."""
        params = {"zeros": [[1.0, 0.0, 1], [-1.0, 0.0, 1]]}
        report = runner.run(JobConfig(subcommand="pair-from-mate", params=params))
        assert report.verification.passed
        assert report.verification.a0_value == pytest.approx(0.25, abs=1e-9)

    def test_pair_from_mate_needs_input(self, runner):
        """Either a mate or zeros."""
        with pytest.raises(DomainError):
            runner.run(JobConfig(subcommand="pair-from-mate"))

    def test_simulate_ignores_threads(self, runner):
        """The worker count is not part of the report."""
        params = {"family": "power:beta=1", "trials": 4, "truncate": 64, "threads": 2}
        report = runner.run(JobConfig(subcommand="simulate", params=params))
        assert "threads" not in report.parameters
        assert report.result.truncations[-1] == 64


class TestTasks:
    """End-to-end checks of the remaining tasks through the runner."""

    @pytest.fixture
    def pair_file(self, write_json, half_pair):
        return str(write_json("pair.json", json.loads(dumps(encode_pair(half_pair)))))

    def test_corona(self, runner, pair_file):
        """The corona bound of a pair is positive."""
        report = runner.run(JobConfig(subcommand="corona", params={"pair": pair_file, "radial": 16, "angular": 16}))
        assert 0 < report.delta <= 1 + 1e-12
        assert (report.radial, report.angular) == (16, 16)

    def test_blaschke(self, runner, write_json):
        """One zero at 1/2: |B(1)| = 1, |B'(1)| = 3, Ahern-Clark sums 1 and 2."""
        seq = write_json("zeros.json", {"points": [0.5]})
        report = runner.run(JobConfig(subcommand="blaschke", params={"seq": str(seq), "zeta": "1", "derivs": 1}))
        assert report.degree == 1
        moduli = [abs(complex(re, im)) for re, im in report.derivatives]
        assert moduli == [pytest.approx(1.0), pytest.approx(3.0)]
        assert report.ahern_clark == [pytest.approx(1.0), pytest.approx(2.0)]
        assert report.partial_energies == [pytest.approx(3.0)]

    def test_gram(self, runner, pair_file, write_json):
        """Normalized Gram matrices start at the identity."""
        seq = write_json("seq.json", {"points": [0.0, 0.5]})
        report = runner.run(JobConfig(subcommand="gram", params={"pair": pair_file, "seq": str(seq)}))
        assert report.truncations == [1, 2]
        assert report.min_eigs[0] == pytest.approx(1.0)
        assert 0 < report.min_eigs[1] < 1 < report.max_eigs[1]

    def test_membership(self, runner, write_json):
        """Constants lie in the range of the Toeplitz operator with symbol conj((z - 1)/2)."""
        symbol = write_json("symbol.json", [-0.5, 0.5])
        f = write_json("f.json", [1.0])
        params = {"symbol": str(symbol), "f": str(f), "start": 16, "doublings": 1}
        report = runner.run(JobConfig(subcommand="membership", params=params))
        assert report.curve.truncations == [16, 32]
        assert max(report.curve.residuals) < 1e-10

    def test_construct_then_add_point(self, runner, pair_file, write_json, tmp_path):
        """A constructed multiplier is extended by one point."""
        seq = write_json("points.json", {"points": [0.3, -0.4, [0.0, 0.2]]})
        values = write_json("values.json", [1.0, 2.0, -1.0])
        out = tmp_path / "F.json"
        params = {"pair": pair_file, "seq": str(seq), "values": str(values)}
        report, _ = runner.execute(JobConfig(subcommand="construct", params=params, out=out))
        assert report.passed
        assert report.split == (0, 3, 0)

        params = {"pair": pair_file, "F": str(out), "seq": str(seq), "point": "0.5", "value": "3"}
        extended = runner.run(JobConfig(subcommand="add-point", params=params))
        assert extended.residual < 1e-6
        assert extended.max_change_on_zeros < 1e-6

    def test_three_series(self, runner):
        """Fast decay: the exceedance series converges."""
        params = {"family": "power:beta=4", "count": 64}
        report = runner.run(JobConfig(subcommand="three-series", params=params))
        assert report.result.count == 64
        assert report.result.exceedance.classification == SeriesClass.CONVERGENT

    def test_dyadic(self, runner):
        """Geometric radii put one point per annulus."""
        report = runner.run(JobConfig(subcommand="dyadic", params={"family": "geometric:q=0.5", "count": 10}))
        assert report.result.counts == [0] + [1] * 10

    def test_exceedance(self, runner):
        """r = 1/2, M = 1: exact probability 1/3."""
        report = runner.run(JobConfig(subcommand="exceedance", params={"r": 0.5, "draws": 10000, "seed": 2}))
        assert report.result.exact == pytest.approx(1 / 3)
        assert report.z_score < 4.5


if __name__ == "__main__":
    pytest.main([__file__])
