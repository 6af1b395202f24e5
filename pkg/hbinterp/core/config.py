"""
Configuration and validation of hbinterp parameters.

Manages the hbinterp.yml file: numerical tolerances, grid sizes, simulation
settings and output preferences. Library functions take explicit keyword
arguments; an argument left unset is read from the active configuration
(DEFAULTS unless a block runs under use_config). JobRunner runs every task
under the HbConfig built by the CLI from the file and the flags.
"""

import os
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import Any, Iterator, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator


class OutputFormat(str, Enum):
    """Supported report formats."""

    JSON = "json"
    CSV = "csv"
    MARKDOWN = "markdown"


class ToleranceConfig(BaseModel):
    """Numerical guards and acceptance tolerances."""

    model_config = ConfigDict(extra="forbid")

    disk_margin: float = Field(default=1e-14, description="Interior margin of the unit disk")
    circle_tol: float = Field(default=1e-12, description="Unit circle membership tolerance")
    pole_guard: float = Field(default=1e-14, description="Minimum |1 - conj(l) z| for factor evaluation")
    boundary_pole_guard: float = Field(default=1e-12, description="Pole guard for boundary Taylor jets")
    pair_identity: float = Field(default=1e-9, description="|a|^2 + |b|^2 = 1 tolerance")
    den_root_margin: float = Field(default=1e-10, description="Denominator roots must lie beyond 1 + margin")
    boundary_root: float = Field(default=1e-8, description="Root is on the circle if ||r| - 1| is below this")
    cluster_radius: float = Field(default=1e-6, description="Root multiplicity clustering radius")
    root_residual: float = Field(default=1e-8, description="Accepted relative residual at a computed root")
    root_max_iter: int = Field(default=200, description="Aberth iteration cap")
    negativity: float = Field(default=1e-12, description="Allowed dip of a trigonometric polynomial below 0")
    division_residual: float = Field(default=1e-9, description="Relative synthetic division residual")
    quadrature_rel: float = Field(default=1e-8, description="Relative change stopping the grid doubling")
    pick_pivot: float = Field(default=1e-12, description="Pivot tolerance of the Pick Cholesky test")
    bisection_rel: float = Field(default=1e-9, description="Relative bracket width for t_star")
    interpolation_residual: float = Field(default=1e-8, description="Accepted interpolation residual")


class GridConfig(BaseModel):
    """Sampling grids."""

    model_config = ConfigDict(extra="forbid")

    boundary: int = Field(default=4096, ge=16, description="Uniform grid on the unit circle")
    corona_radial: int = Field(default=64, ge=2, description="Radial samples for disk minima")
    corona_angular: int = Field(default=64, ge=4, description="Angular samples for disk minima")
    quadrature_start: int = Field(default=256, ge=16, description="First trapezoid grid")
    quadrature_cap: int = Field(default=2**20, ge=16, description="Largest trapezoid grid")
    gram_cap: int = Field(default=4096, ge=1, description="Largest Gram matrix")


class SimulationConfig(BaseModel):
    """Monte-Carlo experiment settings."""

    model_config = ConfigDict(extra="forbid")

    threads: Optional[int] = Field(default=None, validate_default=True, description="Worker threads (HB_THREADS)")
    trials: int = Field(default=200, ge=1, description="Number of trials")
    truncation: int = Field(default=4096, ge=1, description="Largest truncation")
    master_seed: int = Field(default=42, ge=0, description="Master seed")
    threshold: float = Field(default=10.0, gt=0, description="Exceedance threshold")

    @field_validator("threads", mode="before")
    @classmethod
    def resolve_threads(cls, v: Optional[Union[int, str]]) -> int:
        """Resolves the worker count from HB_THREADS when unset."""
        if v is None or v == "":
            v = os.getenv("HB_THREADS") or os.cpu_count() or 1
        if isinstance(v, str) and v.startswith("${") and v.endswith("}"):
            v = os.getenv(v[2:-1]) or os.cpu_count() or 1
        threads = int(v)
        if threads < 1:
            raise ValueError("threads must be >= 1")
        return threads


class OutputConfig(BaseModel):
    """Configuration de la sortie."""

    model_config = ConfigDict(extra="forbid")

    format: OutputFormat = Field(default=OutputFormat.JSON, description="Default report format")


class HbConfig(BaseModel):
    """Complete hbinterp configuration."""

    model_config = ConfigDict(extra="forbid")

    tolerances: ToleranceConfig = Field(default_factory=ToleranceConfig)
    grids: GridConfig = Field(default_factory=GridConfig)
    simulation: SimulationConfig = Field(default_factory=SimulationConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    log_level: str = Field(default="INFO", description="Niveau de log")

    @classmethod
    def load_from_file(cls, file_path: Union[str, Path]) -> "HbConfig":
        """Charge la configuration depuis un fichier YAML."""
        file_path = Path(file_path)
        if not file_path.exists():
            raise FileNotFoundError(f"Configuration file not found: {file_path}")

        with open(file_path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}

        return cls(**data)

    def save_to_file(self, file_path: Union[str, Path]) -> None:
        """Sauvegarde la configuration dans un fichier YAML."""
        file_path = Path(file_path)
        data = self.model_dump(mode="json")

        with open(file_path, "w", encoding="utf-8") as f:
            yaml.dump(data, f, default_flow_style=False, allow_unicode=True, indent=2)


def create_default_config() -> HbConfig:
    """Creates a default configuration."""
    return HbConfig()


DEFAULTS = HbConfig(simulation=SimulationConfig(threads=1))

_active: HbConfig = DEFAULTS


def active_config() -> HbConfig:
    """Configuration read by the numerics when an argument is left unset."""
    return _active


@contextmanager
def use_config(config: HbConfig) -> Iterator[HbConfig]:
    """Makes config the active configuration for the duration of the block."""
    global _active
    previous = _active
    _active = config
    try:
        yield config
    finally:
        _active = previous


class _ActiveSection:
    """Attribute view on one section of the active configuration."""

    def __init__(self, section: str) -> None:
        self._section = section

    def __getattr__(self, name: str) -> Any:
        return getattr(getattr(_active, self._section), name)

    def __repr__(self) -> str:
        return repr(getattr(_active, self._section))


TOL: Any = _ActiveSection("tolerances")
GRIDS: Any = _ActiveSection("grids")
SIMULATION: Any = _ActiveSection("simulation")
