"""
Job runner for hbinterp.

A JobConfig names one task with its parameters and the output target;
JobRunner validates it, runs the task with the active HbConfig and hands
the report to the writer of the requested format.
"""

import logging
import time
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from hbinterp.core.config import HbConfig, OutputFormat, create_default_config, use_config
from hbinterp.core.errors import DomainError
from hbinterp.core.models import ExperimentReport
from hbinterp.core.task_registry import TaskRegistry, get_global_registry
from hbinterp.generators import get_writer


logger = logging.getLogger(__name__)


class JobConfig(BaseModel):
    """One batch job: a subcommand, its parameters and the output target."""

    model_config = ConfigDict(extra="forbid")

    subcommand: str = Field(description="Task name")
    params: Dict[str, Any] = Field(default_factory=dict, description="Task parameters")
    out: Optional[Path] = Field(default=None, description="Output file (stdout when unset)")
    format: OutputFormat = Field(default=OutputFormat.JSON, description="Report format")


class JobRunner:
    """Runs jobs against a configuration and a task registry."""

    def __init__(self, config: Optional[HbConfig] = None, registry: Optional[TaskRegistry] = None) -> None:
        self.config = config or create_default_config()
        self.registry = registry or get_global_registry()
        self._last_duration: Optional[float] = None

    def run(self, job: JobConfig) -> ExperimentReport:
        """
        Validates and executes a job.

        Raises:
            DomainError: unknown task or invalid parameters
            HbError: failure inside the task
        """
        try:
            task = self.registry.get_task(job.subcommand)
        except ValueError as e:
            raise DomainError(str(e)) from e

        errors = task.validate_params(job.params)
        if errors:
            raise DomainError("; ".join(errors))

        start = time.perf_counter()
        logger.info(f"Running {task.name}")
        with use_config(self.config):
            report = task.run(job.params, self.config)
        self._last_duration = time.perf_counter() - start
        logger.info(f"{task.name} finished in {self._last_duration:.2f}s")
        return report

    def emit(self, report: ExperimentReport, job: JobConfig) -> str:
        """Renders the report and writes it to job.out when set."""
        writer = get_writer(job.format)
        content = writer.write(report, job.out)
        if job.out is not None:
            logger.info(f"Report written to {job.out}")
        return content

    def execute(self, job: JobConfig) -> Tuple[ExperimentReport, str]:
        report = self.run(job)
        return report, self.emit(report, job)

    @property
    def last_duration(self) -> Optional[float]:
        return self._last_duration
