"""
Pythagorean pairs (a, b) for rational non-extreme b.

Spectral factorization of nonnegative trigonometric polynomials
(Fejer-Riesz), the outer mate a of a rational b with |a|^2 + |b|^2 = 1 on
the circle, the converse construction of b from a prescribed mate, and the
validation report of a pair.
"""

import logging
import math
from typing import Any, Iterable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.optimize import minimize_scalar

from hbinterp.core.config import GRIDS, TOL
from hbinterp.core.errors import (
    DomainError,
    FactorizationError,
    NonConvergenceError,
    PreconditionError,
)
from hbinterp.numerics.disk import as_circle_point
from hbinterp.numerics.polynomials import ComplexPoly, as_coefficients, root_clusters
from hbinterp.numerics.rational import RationalFn


logger = logging.getLogger(__name__)


def circle_grid(grid_size: int) -> np.ndarray:
    """e^{i theta_k}, theta_k = 2 pi k / grid_size."""
    if grid_size < 16:
        raise PreconditionError(f"grid_size must be >= 16, got {grid_size}")
    return np.exp(2j * np.pi * np.arange(grid_size) / grid_size)


def sup_norm_on_circle(f: Any, grid_size: Optional[int] = None) -> float:
    """
    max |f| on the unit circle.

    The grid maximum is refined by a bounded scalar search on the cell
    around the best grid point.
    """
    grid_size = GRIDS.boundary if grid_size is None else grid_size
    theta = 2 * np.pi * np.arange(grid_size) / grid_size
    values = np.abs(f(np.exp(1j * theta)))
    k = int(np.argmax(values))
    best = float(values[k])
    h = 2 * np.pi / grid_size
    refined = minimize_scalar(
        lambda t: -abs(complex(f(np.exp(1j * t)))),
        bounds=(theta[k] - h, theta[k] + h),
        method="bounded",
        options={"xatol": 1e-12},
    )
    if refined.success:
        best = max(best, float(-refined.fun))
    return best


class BoundaryZeroSet(BaseModel):
    """Distinct points zeta_j of the circle with multiplicities m_j."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    points: np.ndarray
    multiplicities: Tuple[int, ...]

    @field_validator("points", mode="before")
    @classmethod
    def _on_circle(cls, v: Any) -> np.ndarray:
        arr = np.atleast_1d(np.asarray(v, dtype=np.complex128)).copy()
        for zeta in arr:
            as_circle_point(zeta)
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def _consistent(self) -> "BoundaryZeroSet":
        if len(self.points) != len(self.multiplicities):
            raise DomainError("Each boundary zero needs a multiplicity")
        if any(m < 1 for m in self.multiplicities):
            raise DomainError("Multiplicities must be positive")
        for i in range(len(self.points)):
            for j in range(i + 1, len(self.points)):
                if abs(self.points[i] - self.points[j]) <= TOL.boundary_root:
                    raise DomainError(f"Boundary zeros {self.points[i]} and {self.points[j]} coincide")
        return self

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[complex, int]]) -> "BoundaryZeroSet":
        pairs = list(pairs)
        return cls(points=[p for p, _ in pairs], multiplicities=tuple(int(m) for _, m in pairs))

    def items(self) -> List[Tuple[complex, int]]:
        return list(zip(self.points.tolist(), self.multiplicities))

    def __len__(self) -> int:
        return len(self.multiplicities)

    @property
    def N(self) -> int:
        return int(sum(self.multiplicities))

    @property
    def M(self) -> int:
        return int(max(self.multiplicities)) if self.multiplicities else 0

    def a0(self) -> ComplexPoly:
        """Monic prod (z - zeta_j)^m_j."""
        poly = ComplexPoly.constant(1.0)
        for zeta, m in self.items():
            poly = poly * ComplexPoly.linear_power(zeta, m)
        return poly


class SpectralFactor(BaseModel):
    """Outer factor s of a trigonometric polynomial with its circle zeros."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    poly: ComplexPoly
    boundary: List[Tuple[complex, int]]


def _check_laurent(c: Any) -> np.ndarray:
    c = as_coefficients(c)
    if len(c) % 2 != 1:
        raise DomainError(f"Laurent coefficients c_-d..c_d need odd length, got {len(c)}")
    scale = max(float(np.max(np.abs(c))), 1.0)
    if np.max(np.abs(c - np.conj(c[::-1]))) > 1e-12 * scale:
        raise DomainError("Laurent coefficients must satisfy c_-k = conj(c_k)")
    # trim vanishing outer pairs
    tiny = 1e-14 * float(np.max(np.abs(c))) if np.any(c) else 0.0
    while len(c) > 1 and abs(c[0]) <= tiny and abs(c[-1]) <= tiny:
        c = c[1:-1]
    return c


def spectral_factor(
    c: Any,
    *,
    grid_size: Optional[int] = None,
    negativity: Optional[float] = None,
    boundary_tol: Optional[float] = None,
) -> SpectralFactor:
    """
    Fejer-Riesz factorization R = |s|^2 with s outer of degree d.

    Args:
        c: Laurent coefficients c_-d..c_d of R(theta) = sum c_k e^{ik theta}

    Raises:
        FactorizationError: R is negative somewhere, vanishes identically, or
            has a circle root of odd multiplicity
        NonConvergenceError: the factor does not reproduce R to 1e-8
    """
    grid_size = GRIDS.boundary if grid_size is None else grid_size
    negativity = TOL.negativity if negativity is None else negativity
    boundary_tol = TOL.boundary_root if boundary_tol is None else boundary_tol
    c = _check_laurent(c)
    d = (len(c) - 1) // 2
    z = circle_grid(grid_size)
    R = np.real(np.polynomial.polynomial.polyval(z, c) * z ** (-d))

    if not np.any(c):
        raise FactorizationError("Trigonometric polynomial vanishes identically")
    if R.min() < -negativity:
        raise FactorizationError(f"Trigonometric polynomial is negative (min {R.min():.3e})")
    if d == 0:
        return SpectralFactor(poly=ComplexPoly.constant(np.sqrt(c[0].real)), boundary=[])

    # z^d R(z) has ascending coefficients c
    clusters = root_clusters(ComplexPoly(c))
    selected: List[complex] = []
    boundary: List[Tuple[complex, int]] = []
    for root, m in clusters:
        if abs(abs(root) - 1.0) <= boundary_tol:
            if m % 2:
                raise FactorizationError(f"Circle root {root} has odd multiplicity {m}")
            zeta = root / abs(root)
            boundary.append((zeta, m // 2))
            selected.extend([zeta] * (m // 2))
        elif abs(root) > 1.0:
            selected.extend([root] * m)

    if len(selected) != d:
        raise FactorizationError(
            f"Root pairing failed: {len(selected)} roots selected for degree {d}"
        )

    # |gamma|^2 = |c_d| / prod_outer |r|
    gamma = np.sqrt(abs(c[-1]) / np.prod(np.abs(selected)))
    s = ComplexPoly.from_roots(selected, gamma)

    fit = np.abs(s(z)) ** 2
    error = float(np.max(np.abs(fit - R)))
    if error > 1e-8 * float(np.max(np.abs(R))):
        raise NonConvergenceError(
            f"Spectral factor misses R by {error:.3e} on the grid", last_values=[error]
        )
    logger.debug(f"Spectral factor of degree {d}: {len(boundary)} circle zero(s), error {error:.2e}")
    return SpectralFactor(poly=s, boundary=boundary)


def fejer_riesz(c: Any, **kwargs: Any) -> ComplexPoly:
    """Outer s with |s(e^{i theta})|^2 = sum_k c_k e^{ik theta}."""
    return spectral_factor(c, **kwargs).poly


def _unit_phase(value: complex) -> complex:
    return abs(value) / value if value != 0 else 1.0 + 0j


def _min_root_modulus(p: ComplexPoly) -> float:
    if p.degree < 1:
        return float("inf")
    return float(min(abs(r) for r, _ in root_clusters(p)))


class RationalPair(BaseModel):
    """Pythagorean pair (a, b) with the boundary zero set of a."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    b: RationalFn
    a: RationalFn
    zeros: BoundaryZeroSet

    @model_validator(mode="after")
    def _not_zero(self) -> "RationalPair":
        if self.a.is_zero and self.b.is_zero:
            raise DomainError("a and b cannot both vanish")
        return self

    @property
    def N(self) -> int:
        return self.zeros.N

    @property
    def M(self) -> int:
        return self.zeros.M

    def checked(self, grid_size: Optional[int] = None, tol: Optional[float] = None) -> "RationalPair":
        """Returns self if every pair invariant holds, raises otherwise."""
        report = verify_pair(self, grid_size, tol)
        if not report.passed:
            raise FactorizationError(f"Pair invariants fail: {report.failures}")
        return self


class PairVerification(BaseModel):
    """Outcome of verify_pair."""

    model_config = ConfigDict(frozen=True)

    grid_size: int
    tol: float
    max_residual: float
    min_interior_root_modulus: Optional[float] = Field(default=None, description="None when a has no roots")
    outer: bool
    a0_value: float
    a0_positive: bool
    mate_sup_norm: float
    failures: List[str]

    @property
    def passed(self) -> bool:
        return not self.failures


def verify_pair(
    pair: RationalPair, grid_size: Optional[int] = None, tol: Optional[float] = None
) -> PairVerification:
    """Grid residual of |a|^2 + |b|^2 = 1, outerness of a and the sign of a(0)."""
    grid_size = GRIDS.boundary if grid_size is None else grid_size
    tol = TOL.pair_identity if tol is None else tol
    z = circle_grid(grid_size)
    residual = float(np.max(np.abs(np.abs(pair.a(z)) ** 2 + np.abs(pair.b(z)) ** 2 - 1.0)))
    min_mod = _min_root_modulus(pair.a.num)
    outer = min_mod >= 1.0 - TOL.boundary_root
    a0 = complex(pair.a(0.0))
    a0_positive = a0.real > 0 and abs(a0.imag) <= 1e-12 * max(abs(a0), 1.0)

    failures = []
    if residual > tol:
        failures.append(f"identity residual {residual:.3e} > {tol:g}")
    if not outer:
        failures.append(f"a has a root of modulus {min_mod:.6g} inside the disk")
    if not a0_positive:
        failures.append(f"a(0) = {a0} is not positive")

    return PairVerification(
        grid_size=grid_size,
        tol=tol,
        max_residual=residual,
        min_interior_root_modulus=min_mod if math.isfinite(min_mod) else None,
        outer=outer,
        a0_value=a0.real,
        a0_positive=a0_positive,
        mate_sup_norm=sup_norm_on_circle(pair.a, grid_size),
        failures=failures,
    )


def _defect_laurent(q: ComplexPoly, p: ComplexPoly) -> np.ndarray:
    """Laurent coefficients of |q|^2 - |p|^2 on the circle."""
    d = max(q.degree, p.degree, 0)
    return q.laurent_modulus_squared(d) - p.laurent_modulus_squared(d)


def pythagorean_mate(
    b: RationalFn, grid_size: Optional[int] = None, tol: Optional[float] = None
) -> RationalPair:
    """
    Outer mate a of b, normalized by a(0) > 0.

    Raises:
        PreconditionError: sup |b| on the circle differs from 1 by more than tol
        FactorizationError: b is inner or the factorization fails
    """
    tol = TOL.pair_identity if tol is None else tol
    sup_b = sup_norm_on_circle(b, grid_size)
    if sup_b > 1.0 + tol:
        raise PreconditionError(f"sup |b| = {sup_b:.12g} exceeds 1")
    if sup_b < 1.0 - tol:
        raise PreconditionError(f"sup |b| = {sup_b:.12g} is not 1")

    factor = spectral_factor(_defect_laurent(b.den, b.num), grid_size=grid_size)
    s = factor.poly * _unit_phase(complex(factor.poly(0.0) / b.den(0.0)))
    a = RationalFn.checked(s, b.den)
    zeros = BoundaryZeroSet.from_pairs(factor.boundary)
    logger.info(f"Mate of degree {s.degree} with N={zeros.N}, M={zeros.M}")
    return RationalPair(b=b, a=a, zeros=zeros).checked(grid_size, tol)


def pair_from_mate(
    a: RationalFn, grid_size: Optional[int] = None, tol: Optional[float] = None
) -> RationalPair:
    """
    The pair (a, b) built from a prescribed outer a with sup |a| <= 1.

    b = p/q where |p|^2 = |q|^2 - |s|^2 and b(0) >= 0.

    Raises:
        PreconditionError: sup |a| > 1, or a has no zero on the circle
        FactorizationError: a is not outer
    """
    tol = TOL.pair_identity if tol is None else tol
    sup_a = sup_norm_on_circle(a, grid_size)
    if sup_a > 1.0 + tol:
        raise PreconditionError(f"sup |a| = {sup_a:.12g} exceeds 1")
    a0 = complex(a(0.0))
    if a0 == 0:
        raise FactorizationError("a(0) = 0: the mate is not outer")
    s = a.num * _unit_phase(a0)
    a = RationalFn(num=s, den=a.den)

    boundary = [
        (r / abs(r), m)
        for r, m in (root_clusters(s) if s.degree >= 1 else [])
        if abs(abs(r) - 1.0) <= TOL.boundary_root
    ]
    if not boundary:
        raise PreconditionError("The mate has no zero on the unit circle")

    p = fejer_riesz(_defect_laurent(a.den, s), grid_size=grid_size)
    lowest = p.coeffs[np.flatnonzero(np.abs(p.coeffs) > 1e-14)[0]] if not p.is_zero else 1.0
    b = RationalFn(num=p * _unit_phase(complex(lowest)), den=a.den)
    zeros = BoundaryZeroSet.from_pairs(boundary)
    return RationalPair(b=b, a=a, zeros=zeros).checked(grid_size, tol)


def local_pair(zeros: BoundaryZeroSet, grid_size: Optional[int] = None) -> RationalPair:
    """Pair whose mate is prod (z - zeta_j)^m_j / 2^N."""
    a0 = zeros.a0()
    return pair_from_mate(RationalFn(num=a0 * (0.5**zeros.N)), grid_size)


def corona_lower_bound(
    pair: RationalPair,
    radial: Optional[int] = None,
    angular: Optional[int] = None,
    r_max: float = 1.0 - 1e-4,
) -> float:
    """min of |a|^2 + |b|^2 over a radial-angular grid of the disk."""
    radial = GRIDS.corona_radial if radial is None else radial
    angular = GRIDS.corona_angular if angular is None else angular
    if radial < 2 or angular < 4:
        raise PreconditionError("Corona grid needs radial >= 2 and angular >= 4")
    radii = np.linspace(0.0, r_max, radial)
    theta = 2 * np.pi * np.arange(angular) / angular
    z = radii[:, None] * np.exp(1j * theta)[None, :]
    values = np.abs(pair.a(z)) ** 2 + np.abs(pair.b(z)) ** 2
    return float(values.min())


def mate_sup_norm(pair: RationalPair, grid_size: Optional[int] = None) -> float:
    """||a||_inf on the circle."""
    return sup_norm_on_circle(pair.a, grid_size)


def pair_from_b_coefficients(
    num: Iterable[complex], den: Optional[Iterable[complex]] = None, **kwargs: Any
) -> RationalPair:
    """Convenience: the mate of b = num/den given as coefficient lists."""
    b = RationalFn.checked(list(num), list(den) if den is not None else [1.0])
    return pythagorean_mate(b, **kwargs)

