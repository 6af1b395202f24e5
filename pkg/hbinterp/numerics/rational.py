"""
Rational functions analytic on the closed unit disk.

RationalFn stores numerator and denominator polynomials. The checked
constructor enforces the pole condition (all denominator roots strictly
outside the closed disk) and cancels common roots; arithmetic between
already checked functions keeps that property and skips the root finding.
"""

import logging
from typing import Any, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.signal import lfilter

from hbinterp.core.config import TOL
from hbinterp.core.errors import DomainError, SingularityError
from hbinterp.numerics.polynomials import ComplexPoly, root_clusters


logger = logging.getLogger(__name__)


def series_divide(num: np.ndarray, den: np.ndarray, n_terms: int) -> np.ndarray:
    """First n_terms power series coefficients of num/den (den[0] != 0)."""
    if n_terms <= 0:
        return np.zeros(0, dtype=np.complex128)
    impulse = np.zeros(n_terms, dtype=np.complex128)
    impulse[0] = 1.0
    num = np.asarray(num, dtype=np.complex128)
    if len(num) == 0:
        return impulse * 0
    return lfilter(num, np.asarray(den, dtype=np.complex128), impulse)


def _cancel_common_roots(
    num: ComplexPoly, den: ComplexPoly, tol: float
) -> Tuple[ComplexPoly, ComplexPoly, List[complex]]:
    """Removes roots shared by num and den (within tol)."""
    if num.degree < 1 or den.degree < 1:
        return num, den, []
    num_roots = [c for c, m in root_clusters(num) for _ in range(m)]
    den_roots = [c for c, m in root_clusters(den) for _ in range(m)]
    cancelled: List[complex] = []
    for r in list(den_roots):
        distances = [abs(r - s) for s in num_roots]
        if distances and min(distances) <= tol:
            num_roots.pop(int(np.argmin(distances)))
            den_roots.remove(r)
            cancelled.append(r)
    if not cancelled:
        return num, den, []
    return (
        ComplexPoly.from_roots(num_roots, num.coeffs[-1]),
        ComplexPoly.from_roots(den_roots, den.coeffs[-1]),
        cancelled,
    )


class RationalFn(BaseModel):
    """num(z) / den(z) with den free of roots in the closed unit disk."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    __array_ufunc__ = None

    num: ComplexPoly
    den: ComplexPoly = Field(default_factory=lambda: ComplexPoly.constant(1.0))

    @model_validator(mode="after")
    def _nonzero_den(self) -> "RationalFn":
        if self.den.is_zero:
            raise DomainError("Denominator of a rational function cannot be zero")
        return self

    @classmethod
    def checked(
        cls,
        num: Any,
        den: Any = (1.0,),
        *,
        margin: Optional[float] = None,
        reduce_tol: Optional[float] = None,
    ) -> "RationalFn":
        """
        Builds a validated rational function.

        Args:
            num: numerator (ComplexPoly or ascending coefficients)
            den: denominator (ComplexPoly or ascending coefficients)
            margin: denominator roots must have modulus > 1 + margin
            reduce_tol: common roots closer than this are cancelled

        Raises:
            DomainError: a pole lies in the closed unit disk
        """
        margin = TOL.den_root_margin if margin is None else margin
        reduce_tol = TOL.boundary_root if reduce_tol is None else reduce_tol
        num = num if isinstance(num, ComplexPoly) else ComplexPoly(num)
        den = den if isinstance(den, ComplexPoly) else ComplexPoly(den)
        if den.is_zero:
            raise DomainError("Denominator of a rational function cannot be zero")
        if num.is_zero:
            return cls(num=num, den=ComplexPoly.constant(1.0))

        num, den, cancelled = _cancel_common_roots(num, den, reduce_tol)
        if cancelled:
            logger.debug(f"Cancelled {len(cancelled)} common root(s)")

        if den.degree >= 1:
            poles = np.array([c for c, _ in root_clusters(den)])
            inside = poles[np.abs(poles) <= 1.0 + margin]
            if inside.size:
                raise DomainError(
                    f"Rational function has pole(s) in the closed unit disk: {inside.tolist()}"
                )
        return cls(num=num, den=den)

    @classmethod
    def from_poly(cls, p: ComplexPoly) -> "RationalFn":
        return cls(num=p)

    @classmethod
    def constant(cls, value: complex) -> "RationalFn":
        return cls(num=ComplexPoly.constant(value))

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __call__(self, z: Any) -> Any:
        return self.num(z) / self.den(z)

    def _coerce(self, other: Any) -> "RationalFn":
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, ComplexPoly):
            return RationalFn(num=other)
        if isinstance(other, (int, float, complex, np.number)):
            return RationalFn.constant(complex(other))
        raise TypeError(f"Cannot combine RationalFn with {type(other).__name__}")

    def __add__(self, other: Any) -> "RationalFn":
        other = self._coerce(other)
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        if np.array_equal(self.den.coeffs, other.den.coeffs):
            return RationalFn(num=self.num + other.num, den=self.den)
        return RationalFn(
            num=self.num * other.den + other.num * self.den, den=self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self) -> "RationalFn":
        return RationalFn(num=-self.num, den=self.den)

    def __sub__(self, other: Any) -> "RationalFn":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "RationalFn":
        return self._coerce(other) + (-self)

    def __mul__(self, other: Any) -> "RationalFn":
        other = self._coerce(other)
        if self.is_zero or other.is_zero:
            return RationalFn(num=ComplexPoly.zero())
        return RationalFn(num=self.num * other.num, den=self.den * other.den)

    __rmul__ = __mul__

    def poles(self) -> np.ndarray:
        if self.den.degree < 1:
            return np.zeros(0, dtype=np.complex128)
        return np.array([c for c, _ in root_clusters(self.den)], dtype=np.complex128)

    def pole_radius(self) -> float:
        """Smallest pole modulus (inf for polynomials)."""
        poles = self.poles()
        return float(np.min(np.abs(poles))) if poles.size else float("inf")

    def taylor_at(self, zeta: complex, order: int) -> np.ndarray:
        """Taylor coefficients c_0..c_order at zeta."""
        n = self.num.taylor_at(zeta, order)
        d = self.den.taylor_at(zeta, order)
        if abs(d[0]) <= TOL.boundary_pole_guard * max(self.den.magnitude_scale(zeta), 1.0):
            raise SingularityError(f"Rational function has a pole at {zeta}")
        return series_divide(n, d, order + 1)

    def power_series(self, n_terms: int) -> np.ndarray:
        """Taylor coefficients at 0."""
        if abs(self.den.coeffs[0]) == 0:
            raise SingularityError("Rational function has a pole at 0")
        return series_divide(self.num.coeffs, self.den.coeffs, n_terms)

    def __repr__(self) -> str:
        return f"RationalFn(num={self.num!r}, den={self.den!r})"
