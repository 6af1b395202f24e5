"""
Base interface for hbinterp tasks.

A task is one unit of batch work (one CLI subcommand): it reads its inputs
from a parameter dictionary, runs the numerics with the tolerances of an
HbConfig and returns an ExperimentReport.
"""

from abc import ABC, abstractmethod
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Type, TypeVar

from hbinterp.core.config import HbConfig
from hbinterp.core.models import ExperimentReport
from hbinterp.core.serialization import load_json, to_jsonable


ReportT = TypeVar("ReportT", bound=ExperimentReport)


class TaskCategory(str, Enum):
    """Task categories, one per numerical module."""

    PAIR = "pair"
    SPACE = "space"
    INTERPOLATION = "interpolation"
    RANDOM = "random"


class TaskBase(ABC):
    """
    Abstract base class of all hbinterp tasks.

    Subclasses declare their name and inputs and implement run().
    """

    @property
    @abstractmethod
    def category(self) -> TaskCategory:
        """Returns the task category."""
        pass

    @property
    @abstractmethod
    def name(self) -> str:
        """Subcommand name (ex: 'mate', 'np-solve')."""
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        pass

    @property
    def required_params(self) -> List[str]:
        """Parameters that must be present in the parameter dictionary."""
        return []

    @property
    def input_params(self) -> List[str]:
        """Parameters naming JSON input files."""
        return []

    def validate_params(self, params: Dict[str, Any]) -> List[str]:
        """
        Checks the parameter dictionary.

        Returns:
            List of errors (empty if OK)
        """
        errors = [f"Missing parameter: {key}" for key in self.required_params if params.get(key) is None]
        for key in self.input_params:
            path = params.get(key)
            if path is not None and not Path(path).exists():
                errors.append(f"Input file not found: {path}")
        return errors

    @abstractmethod
    def run(self, params: Dict[str, Any], config: HbConfig) -> ExperimentReport:
        """
        Executes the task.

        Raises:
            HbError: numerical or domain failure
        """
        pass

    def load(self, params: Dict[str, Any], key: str) -> Any:
        """Parsed JSON content of the input file named by params[key]."""
        return load_json(params[key])

    @staticmethod
    def option(params: Dict[str, Any], key: str, default: Any) -> Any:
        """params[key] when given on the command line, else the configured default."""
        value = params.get(key)
        return default if value is None else value

    def make_report(self, report_cls: Type[ReportT], params: Dict[str, Any], **fields: Any) -> ReportT:
        from hbinterp import __version__

        parameters = {k: to_jsonable(v) for k, v in sorted(params.items()) if v is not None}
        return report_cls(kind=self.name, version=__version__, parameters=parameters, **fields)

    def __str__(self) -> str:
        return f"{self.name} ({self.category.value})"

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__}: {self.name}>"
