"""
Tests for the hbinterp configuration.
"""

import json
import os
from unittest.mock import patch

import pytest
import yaml

from hbinterp.core.config import (
    DEFAULTS,
    TOL,
    HbConfig,
    OutputFormat,
    SimulationConfig,
    active_config,
    create_default_config,
    use_config,
)
from hbinterp.core.errors import DomainError
from hbinterp.core.runner import JobConfig, JobRunner
from hbinterp.core.serialization import dumps, encode_pair
from hbinterp.core.task_registry import TaskRegistry
from hbinterp.numerics.disk import as_circle_point
from hbinterp.numerics.pick import PickProblem, pick_feasible


class TestHbConfig:
    """Tests for the configuration models."""

    def test_defaults(self):
        """Default tolerances, grids and output."""
        config = create_default_config()
        assert config.tolerances.pair_identity == 1e-9
        assert config.tolerances.root_max_iter == 200
        assert config.grids.boundary == 4096
        assert config.grids.quadrature_cap == 2**20
        assert config.output.format == OutputFormat.JSON
        assert config.log_level == "INFO"

    def test_library_defaults_single_thread(self):
        """The module level defaults never depend on the environment."""
        assert DEFAULTS.simulation.threads == 1

    def test_threads_from_environment(self):
        """HB_THREADS fills an unset thread count."""
        with patch.dict(os.environ, {"HB_THREADS": "3"}):
            assert SimulationConfig().threads == 3

    def test_threads_placeholder(self):
        """${VAR} placeholders are resolved."""
        with patch.dict(os.environ, {"HB_THREADS": "5"}):
            assert SimulationConfig(threads="${HB_THREADS}").threads == 5

    def test_threads_hardware_default(self):
        """Without HB_THREADS the hardware parallelism is used."""
        with patch.dict(os.environ, {}, clear=True), patch("os.cpu_count", return_value=6):
            assert SimulationConfig().threads == 6

    def test_threads_must_be_positive(self):
        """Zero workers is rejected."""
        with pytest.raises(ValueError):
            SimulationConfig(threads=0)

    def test_unknown_key_rejected(self):
        """Typos in the YAML file are errors."""
        with pytest.raises(ValueError):
            HbConfig(tolerances={"pair_identiy": 1e-9})

    def test_invalid_grid_rejected(self):
        """Grids have lower bounds."""
        with pytest.raises(ValueError):
            HbConfig(grids={"boundary": 4})

    def test_save_and_load(self, tmp_path):
        """A saved configuration loads back unchanged."""
        config = HbConfig(simulation=SimulationConfig(threads=2, trials=50), log_level="DEBUG")
        config.output.format = OutputFormat.CSV
        path = tmp_path / "hbinterp.yml"
        config.save_to_file(path)

        data = yaml.safe_load(path.read_text(encoding="utf-8"))
        assert data["simulation"]["trials"] == 50
        assert data["output"]["format"] == "csv"

        loaded = HbConfig.load_from_file(path)
        assert loaded == config

    def test_partial_file(self, tmp_path):
        """Missing sections take their defaults."""
        path = tmp_path / "hbinterp.yml"
        path.write_text("grids:\n  boundary: 1024\n", encoding="utf-8")
        config = HbConfig.load_from_file(path)
        assert config.grids.boundary == 1024
        assert config.grids.corona_radial == 64
        assert config.tolerances.circle_tol == 1e-12

    def test_empty_file(self, tmp_path):
        """An empty file is the default configuration."""
        path = tmp_path / "hbinterp.yml"
        path.write_text("", encoding="utf-8")
        assert HbConfig.load_from_file(path).grids.boundary == 4096

    def test_missing_file(self, tmp_path):
        """Loading a missing file raises FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            HbConfig.load_from_file(tmp_path / "absent.yml")


class TestActiveConfig:
    """Tests for the configuration read by the numerics."""

    def test_defaults_active(self):
        """Outside use_config the module defaults apply."""
        assert active_config() is DEFAULTS
        assert TOL.pick_pivot == 1e-12

    def test_use_config_restores(self):
        """use_config swaps the active configuration for one block."""
        config = HbConfig(tolerances={"pick_pivot": 1e-3})
        with use_config(config):
            assert active_config() is config
            assert TOL.pick_pivot == 1e-3
        assert TOL.pick_pivot == 1e-12

    def test_use_config_restores_on_error(self):
        """The previous configuration comes back after an exception."""
        with pytest.raises(RuntimeError):
            with use_config(HbConfig(tolerances={"circle_tol": 0.1})):
                raise RuntimeError("boom")
        assert TOL.circle_tol == 1e-12

    def test_circle_tolerance_from_config(self):
        """circle_tol decides which points count as boundary points."""
        with pytest.raises(DomainError):
            as_circle_point(1.001)
        with use_config(HbConfig(tolerances={"circle_tol": 1e-2})):
            assert as_circle_point(1.001) == 1.001

    def test_pick_pivot_from_file(self, tmp_path):
        """A pivot tolerance loaded from hbinterp.yml reaches the Pick test."""
        path = tmp_path / "hbinterp.yml"
        path.write_text("tolerances:\n  pick_pivot: 1.0e-3\n", encoding="utf-8")
        # t_star = 1; the Schur complement at t is (t^2 - 1)/3
        problem = PickProblem(nodes=[0.0, 0.5], targets=[0.0, 0.5]).with_scale(1 - 1e-6)
        assert not pick_feasible(problem)
        with use_config(HbConfig.load_from_file(path)):
            assert pick_feasible(problem)

    def test_runner_applies_tolerances(self, write_json, half_pair):
        """The job configuration decides whether a construction passes."""
        pair = write_json("pair.json", json.loads(dumps(encode_pair(half_pair))))
        seq = write_json("seq.json", {"points": [0.3, -0.4]})
        values = write_json("values.json", [1.0, 2.0])
        job = JobConfig(subcommand="construct", params={"pair": str(pair), "seq": str(seq), "values": str(values)})

        loose = JobRunner(HbConfig(simulation=SimulationConfig(threads=1)), TaskRegistry())
        assert loose.run(job).passed

        strict_config = HbConfig(simulation=SimulationConfig(threads=1), tolerances={"interpolation_residual": 1e-30})
        report = JobRunner(strict_config, TaskRegistry()).run(job)
        assert not report.passed
        assert report.failures
        assert TOL.interpolation_residual == 1e-8


if __name__ == "__main__":
    pytest.main([__file__])
