"""
Parametric sequence families.

A RadiiFamily fixes the radii r_n (power law, geometric or explicit); a
SequenceFamily adds the angular law (Steinhaus random angles or fixed
angles). Both reproduce their points deterministically, and the convergence
of the series attached to them is classified in closed form.
"""

import logging
from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from hbinterp.core.config import TOL
from hbinterp.core.errors import DomainError


logger = logging.getLogger(__name__)

_SEED_MODULUS = 2**64


class RadiiKind(str, Enum):
    """Radii laws."""

    POWER = "power"
    GEOMETRIC = "geometric"
    EXPLICIT = "explicit"


class SeriesClass(str, Enum):
    """Closed-form classification of a series."""

    CONVERGENT = "convergent"
    DIVERGENT = "divergent"
    BOUNDARY = "divergent (boundary)"
    FINITE = "finite"
    INDETERMINATE = "indeterminate"


class AngleMode(str, Enum):
    STEINHAUS = "steinhaus"
    FIXED = "fixed"


def steinhaus_angles(seed: int, count: int) -> np.ndarray:
    """
    Angles theta_1..theta_count, i.i.d. uniform on [0, 2pi).

    Philox is counter based: the n-th angle is a function of (seed, n) only,
    so a longer draw extends a shorter one.
    """
    generator = np.random.Generator(np.random.Philox(key=int(seed) % _SEED_MODULUS))
    return 2 * np.pi * generator.random(count)


class RadiiFamily(BaseModel):
    """Radii r_1..r_count of a sequence."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: RadiiKind
    c: float = Field(default=1.0, gt=0, description="Scale of 1 - r_n")
    beta: Optional[float] = Field(default=None, gt=0, description="Power law exponent")
    q: Optional[float] = Field(default=None, gt=0, lt=1, description="Geometric ratio")
    values: Optional[List[float]] = Field(default=None, description="Explicit radii")
    count: int = Field(default=0, ge=0, description="Number of terms")

    @model_validator(mode="after")
    def _check_parameters(self) -> "RadiiFamily":
        if self.kind == RadiiKind.POWER and self.beta is None:
            raise ValueError("power family needs beta")
        if self.kind == RadiiKind.GEOMETRIC and self.q is None:
            raise ValueError("geometric family needs q")
        if self.kind == RadiiKind.EXPLICIT:
            if self.values is None:
                raise ValueError("explicit family needs values")
            if any(not (0.0 <= r < 1.0) for r in self.values):
                raise ValueError("explicit radii must lie in [0, 1)")
            if self.count == 0:
                object.__setattr__(self, "count", len(self.values))
            if self.count > len(self.values):
                raise ValueError(f"count {self.count} exceeds {len(self.values)} explicit radii")
        return self

    def with_count(self, count: int) -> "RadiiFamily":
        return self.model_copy(update={"count": count})

    def radii(self, count: Optional[int] = None) -> np.ndarray:
        """r_1..r_count (count defaults to the family's)."""
        count = self.count if count is None else count
        n = np.arange(1, count + 1, dtype=float)
        if self.kind == RadiiKind.POWER:
            r = np.clip(1.0 - self.c * n ** (-self.beta), 0.0, None)
        elif self.kind == RadiiKind.GEOMETRIC:
            r = np.clip(1.0 - self.c * self.q**n, 0.0, None)
        else:
            if count > len(self.values or []):
                raise DomainError(f"count {count} exceeds the explicit radii")
            r = np.asarray(self.values[:count], dtype=float)
        if np.any(r >= 1.0 - TOL.disk_margin):
            first = int(np.argmax(r >= 1.0 - TOL.disk_margin)) + 1
            raise DomainError(
                f"{self.kind.value} family reaches the unit circle in double precision at n={first}"
            )
        return r

    def one_minus_radii(self, count: Optional[int] = None) -> np.ndarray:
        """1 - r_n computed without cancellation where the law allows it."""
        count = self.count if count is None else count
        n = np.arange(1, count + 1, dtype=float)
        if self.kind == RadiiKind.POWER:
            return np.minimum(self.c * n ** (-self.beta), 1.0)
        if self.kind == RadiiKind.GEOMETRIC:
            return np.minimum(self.c * self.q**n, 1.0)
        return 1.0 - self.radii(count)

    def decay_exponent(self) -> Optional[float]:
        """beta for power laws (1 - r_n ~ c n^-beta); None otherwise."""
        return self.beta if self.kind == RadiiKind.POWER else None


class AngleLaw(BaseModel):
    """Angles of a sequence family."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    mode: AngleMode = AngleMode.FIXED
    seed: Optional[int] = None
    values: Optional[List[float]] = None

    @model_validator(mode="after")
    def _check(self) -> "AngleLaw":
        if self.mode == AngleMode.STEINHAUS and self.seed is None:
            raise ValueError("steinhaus angles need a seed")
        if self.mode == AngleMode.FIXED and not self.values:
            object.__setattr__(self, "values", [0.0])
        return self

    @property
    def is_constant(self) -> bool:
        return self.mode == AngleMode.FIXED and len(set(self.values or [])) == 1

    def angles(self, count: int) -> np.ndarray:
        if self.mode == AngleMode.STEINHAUS:
            return steinhaus_angles(self.seed, count)
        values = self.values or [0.0]
        if len(values) == 1:
            return np.full(count, values[0], dtype=float)
        if count > len(values):
            raise DomainError(f"{len(values)} fixed angles cannot cover {count} points")
        return np.asarray(values[:count], dtype=float)


class SequenceFamily(RadiiFamily):
    """Radii family together with its angular law."""

    angles: AngleLaw = Field(default_factory=AngleLaw)

    def radii_family(self) -> RadiiFamily:
        return RadiiFamily(**self.model_dump(exclude={"angles"}))

    def points(self, count: Optional[int] = None) -> np.ndarray:
        count = self.count if count is None else count
        return self.radii(count) * np.exp(1j * self.angles.angles(count))


def classify_radii(family: RadiiFamily, exponent: float) -> SeriesClass:
    """
    Convergence of sum_n (1 - r_n)^exponent for the infinite family.

    Power laws converge iff beta * exponent > 1 (equality is the logarithmic
    boundary case); geometric laws always converge; explicit lists are
    finite sums.
    """
    if family.kind == RadiiKind.EXPLICIT:
        return SeriesClass.FINITE
    if family.kind == RadiiKind.GEOMETRIC:
        return SeriesClass.CONVERGENT
    power = family.beta * exponent
    if np.isclose(power, 1.0, rtol=0, atol=1e-12):
        return SeriesClass.BOUNDARY
    return SeriesClass.CONVERGENT if power > 1.0 else SeriesClass.DIVERGENT
