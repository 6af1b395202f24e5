"""
Exact disk geometry.

Pseudohyperbolic distance, elementary Blaschke factors, finite Blaschke
products and their Taylor jets at interior or boundary points. Boundary
derivatives of a finite product are evaluated exactly by convolving the
factor-wise Taylor expansions, since every factor is analytic at the circle.

Convention: a zero at the origin contributes the factor z, a zero
lambda != 0 contributes (|lambda|/lambda) (z - lambda)/(1 - conj(lambda) z).
"""

import logging
import math
from enum import Enum
from typing import Any, Iterable, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from hbinterp.core.config import TOL
from hbinterp.core.errors import DomainError, PoleProximityError
from hbinterp.numerics.families import SequenceFamily
from hbinterp.numerics.polynomials import ComplexPoly


logger = logging.getLogger(__name__)


def as_complex(z: Any, name: str = "z") -> complex:
    """Finite complex scalar."""
    try:
        value = complex(z)
    except (TypeError, ValueError) as e:
        raise DomainError(f"{name} is not a complex number: {z!r}") from e
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise DomainError(f"{name} must be finite, got {value}")
    return value


def as_disk_point(z: Any, name: str = "z", margin: Optional[float] = None) -> complex:
    """Point of the open disk with |z| < 1 - margin."""
    margin = TOL.disk_margin if margin is None else margin
    value = as_complex(z, name)
    if abs(value) >= 1.0 - margin:
        raise DomainError(f"{name}={value} is not inside the unit disk (|{name}|={abs(value)!r})")
    return value


def as_circle_point(zeta: Any, name: str = "zeta", tol: Optional[float] = None) -> complex:
    """Point of the unit circle, ||zeta| - 1| <= tol."""
    tol = TOL.circle_tol if tol is None else tol
    value = as_complex(zeta, name)
    if abs(abs(value) - 1.0) > tol:
        raise DomainError(f"{name}={value} is not on the unit circle")
    return value


def as_points(values: Any, name: str = "points") -> np.ndarray:
    arr = np.atleast_1d(np.asarray(values, dtype=np.complex128)).ravel()
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    return arr


class Provenance(str, Enum):
    EXPLICIT = "explicit"
    FAMILY = "family"


class DiskSequence(BaseModel):
    """Finite ordered list of interior points, optionally generated by a family."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    points: np.ndarray
    family: Optional[SequenceFamily] = None

    @field_validator("points", mode="before")
    @classmethod
    def _check_points(cls, v: Any) -> np.ndarray:
        arr = as_points(v).copy()
        if arr.size and np.max(np.abs(arr)) >= 1.0 - TOL.disk_margin:
            worst = arr[np.argmax(np.abs(arr))]
            raise DomainError(f"Sequence point {worst} is not inside the unit disk")
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def _check_family(self) -> "DiskSequence":
        if self.family is not None:
            expected = self.family.points(len(self.points))
            if not np.array_equal(expected, self.points):
                raise DomainError("Family descriptor does not reproduce the sequence points")
        return self

    @classmethod
    def explicit(cls, points: Iterable[complex]) -> "DiskSequence":
        return cls(points=list(points))

    @classmethod
    def from_family(cls, family: SequenceFamily, count: Optional[int] = None) -> "DiskSequence":
        family = family if count is None else family.with_count(count)
        return cls(points=family.points(family.count), family=family)

    @property
    def provenance(self) -> Provenance:
        return Provenance.FAMILY if self.family is not None else Provenance.EXPLICIT

    def __len__(self) -> int:
        return len(self.points)

    def truncate(self, count: int) -> "DiskSequence":
        """First `count` points (the family descriptor follows)."""
        if self.family is not None:
            return DiskSequence.from_family(self.family, min(count, len(self.points)))
        return DiskSequence(points=self.points[:count])

    def rotated(self, zeta: complex) -> "DiskSequence":
        return DiskSequence(points=self.points * as_circle_point(zeta))


def _factor_guard(lam: complex, z: Any, guard: Optional[float] = None) -> Any:
    guard = TOL.pole_guard if guard is None else guard
    den = 1.0 - np.conj(lam) * np.asarray(z, dtype=np.complex128)
    if np.any(np.abs(den) < guard):
        raise PoleProximityError(f"Evaluation point within {guard:g} of the pole of the factor at {lam}")
    return den


def rho(z: Any, w: Any) -> float:
    """Pseudohyperbolic distance |(z - w)/(1 - conj(w) z)|."""
    z = as_disk_point(z, "z")
    w = as_disk_point(w, "w")
    return abs(z - w) / abs(1.0 - w.conjugate() * z)


def mobius(a: Any, z: Any) -> Any:
    """Disk automorphism (a - z)/(1 - conj(a) z)."""
    a = as_disk_point(a, "a")
    den = _factor_guard(a, z)
    return (a - np.asarray(z, dtype=np.complex128)) / den


def blaschke_factor_eval(lam: Any, z: Any, guard: Optional[float] = None) -> Any:
    """(z - lambda)/(1 - conj(lambda) z), vectorized over z."""
    lam = as_disk_point(lam, "lambda")
    den = _factor_guard(lam, z, guard)
    return (np.asarray(z, dtype=np.complex128) - lam) / den


def blaschke_factor_deriv(lam: Any, z: Any, j: int, guard: Optional[float] = None) -> Any:
    """j-th derivative j! conj(lambda)^(j-1) (1 - |lambda|^2)/(1 - conj(lambda) z)^(j+1)."""
    if j < 1:
        raise DomainError(f"Derivative order must be >= 1, got {j}")
    lam = as_disk_point(lam, "lambda")
    den = _factor_guard(lam, z, guard)
    return math.factorial(j) * lam.conjugate() ** (j - 1) * (1.0 - abs(lam) ** 2) / den ** (j + 1)


def szego_kernel(lam: Any, z: Any, guard: Optional[float] = None) -> Any:
    """1/(1 - conj(lambda) z)."""
    lam = as_disk_point(lam, "lambda")
    return 1.0 / _factor_guard(lam, z, guard)


class BlaschkeProduct(BaseModel):
    """Finite Blaschke product with the normalized factor convention."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    zeros: DiskSequence

    @classmethod
    def from_points(cls, points: Iterable[complex]) -> "BlaschkeProduct":
        return cls(zeros=DiskSequence.explicit(points))

    @property
    def points(self) -> np.ndarray:
        return self.zeros.points

    @property
    def degree(self) -> int:
        return len(self.zeros.points)

    def normalization(self) -> complex:
        """prod |lambda|/lambda over the nonzero zeros."""
        lam = self.points[self.points != 0]
        return complex(np.prod(np.abs(lam) / lam)) if lam.size else 1.0 + 0j

    def __call__(self, z: Any) -> Any:
        return blaschke_eval(self, z)

    def to_rational_parts(self) -> Tuple[ComplexPoly, ComplexPoly]:
        """(num, den) with B = num/den, den = prod (1 - conj(lambda) z)."""
        num = ComplexPoly.from_roots(self.points, self.normalization())
        den = ComplexPoly([1.0])
        for lam in self.points:
            if lam != 0:
                den = den * ComplexPoly([1.0, -np.conj(lam)])
        return num, den

    def with_zero(self, lam: complex) -> "BlaschkeProduct":
        return BlaschkeProduct.from_points(list(self.points) + [as_disk_point(lam, "lambda")])


def blaschke_eval(B: BlaschkeProduct, z: Any, guard: Optional[float] = None) -> Any:
    """Product of the normalized factors at z (scalar or array)."""
    z_arr = np.asarray(z, dtype=np.complex128)
    value = np.ones_like(z_arr)
    for lam in B.points:
        if lam == 0:
            value = value * z_arr
        else:
            den = _factor_guard(lam, z_arr, guard)
            value = value * (abs(lam) / lam) * (z_arr - lam) / den
    return value[()] if value.ndim == 0 else value


def _factor_jet(lam: complex, z0: complex, order: int) -> np.ndarray:
    """Taylor coefficients of the unnormalized factor at z0 up to `order`."""
    den = 1.0 - np.conj(lam) * z0
    k = np.arange(1, order + 1)
    jet = np.empty(order + 1, dtype=np.complex128)
    jet[0] = (z0 - lam) / den
    jet[1:] = np.conj(lam) ** (k - 1) * (1.0 - abs(lam) ** 2) / den ** (k + 1)
    return jet


def blaschke_jet(
    B: BlaschkeProduct, z0: Any, order: int, guard: Optional[float] = None
) -> np.ndarray:
    """Taylor coefficients B^(j)(z0)/j!, j = 0..order, by factor-wise convolution."""
    if order < 0:
        raise DomainError(f"Order must be >= 0, got {order}")
    z0 = as_complex(z0, "z0")
    jet = np.zeros(order + 1, dtype=np.complex128)
    jet[0] = 1.0
    for lam in B.points:
        _factor_guard(lam, z0, guard)
        jet = np.convolve(jet, _factor_jet(lam, z0, order))[: order + 1]
    return jet * B.normalization()


def ahern_clark_sum(seq: DiskSequence, zeta: Any, N: int) -> float:
    """sum_n (1 - |lambda_n|)/|zeta - lambda_n|^(N+1)."""
    zeta = as_circle_point(zeta)
    if N < 0:
        raise DomainError(f"N must be >= 0, got {N}")
    pts = seq.points
    return float(np.sum((1.0 - np.abs(pts)) / np.abs(zeta - pts) ** (N + 1)))


def blaschke_taylor_at_boundary(B: BlaschkeProduct, zeta: Any, N: int) -> np.ndarray:
    """
    Coefficients c_0..c_N of the order-N Taylor polynomial of B at zeta.

    Raises:
        PoleProximityError: a zero satisfies |1 - conj(lambda) zeta| < 1e-12
    """
    zeta = as_circle_point(zeta)
    if N < 0:
        raise DomainError(f"N must be >= 0, got {N}")
    acs = ahern_clark_sum(B.zeros, zeta, N)
    if not math.isfinite(acs):
        raise DomainError(f"Ahern-Clark sum of order {N} diverges at {zeta}")
    logger.debug(f"Ahern-Clark sum of order {N} at {zeta}: {acs:.6g}")
    return blaschke_jet(B, zeta, N, guard=TOL.boundary_pole_guard)


def blaschke_radial_derivatives(
    B: BlaschkeProduct, zeta: Any, j: int, r_grid: Iterable[float]
) -> np.ndarray:
    """B^(j)(r zeta) for each r of the grid (r in [0, 1])."""
    zeta = as_circle_point(zeta)
    radii = np.asarray(list(r_grid), dtype=float)
    if np.any((radii < 0) | (radii > 1)):
        raise DomainError("Radial grid must lie in [0, 1]")
    scale = math.factorial(j)
    return np.array(
        [scale * blaschke_jet(B, r * zeta, j)[j] for r in radii], dtype=np.complex128
    )


def partial_product_taylor_tail(B: BlaschkeProduct, zeta: Any, N: int) -> np.ndarray:
    """
    Largest change of the order-N boundary Taylor coefficients when the
    partial product B_{n-1} is extended to B_n, for n = 2..deg B.

    Coefficients are compared relative to c_0 = B_n(zeta): factors whose
    zeros approach the circle tend to the constant -1, so the raw
    coefficients only converge up to a unimodular constant.
    """
    zeta = as_circle_point(zeta)
    jet = np.zeros(N + 1, dtype=np.complex128)
    jet[0] = 1.0
    changes = []
    for n, lam in enumerate(B.points):
        _factor_guard(lam, zeta, TOL.boundary_pole_guard)
        new = np.convolve(jet, _factor_jet(lam, zeta, N))[: N + 1]
        if n > 0:
            changes.append(float(np.max(np.abs(new / new[0] - jet / jet[0]))))
        jet = new
    return np.asarray(changes)
