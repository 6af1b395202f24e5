"""
Truncated Taylor series with a tail bound.

An AnalyticSeries remembers where its coefficients came from: polynomials
are exact, rational functions and finite Blaschke products keep their closed
form (for exact evaluation and boundary jets) next to a truncation whose tail
is bounded by the geometric decay set by the nearest pole.
"""

import logging
import math
from enum import Enum
from typing import Any, Iterable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from hbinterp.core.errors import PoleProximityError, SingularityError
from hbinterp.numerics.disk import BlaschkeProduct, as_disk_point, blaschke_eval, blaschke_jet
from hbinterp.numerics.polynomials import ComplexPoly, as_coefficients
from hbinterp.numerics.rational import RationalFn


logger = logging.getLogger(__name__)

# Relative size of the first dropped coefficient of a rational source.
TRUNCATION_TARGET = 1e-17
MAX_TERMS = 2**17


class SeriesSource(str, Enum):
    POLYNOMIAL = "polynomial"
    RATIONAL = "rational"
    BLASCHKE = "blaschke"
    EXPLICIT = "explicit"


def terms_for_radius(rho: float, degree: int = 0, target: float = TRUNCATION_TARGET) -> int:
    """Number of coefficients after which rho^-k drops below target."""
    if not math.isfinite(rho):
        return degree + 1
    n = degree + 1 + int(math.ceil(math.log(target) / -math.log(rho)))
    if n > MAX_TERMS:
        logger.warning(f"Pole radius {rho:.12g} needs {n} terms, capped at {MAX_TERMS}")
        n = MAX_TERMS
    return n


def geometric_tail(coeffs: np.ndarray, rho: float) -> float:
    """l2 bound of sum_{k >= n} |c_k|^2 assuming |c_k| <= C rho^-k."""
    n = len(coeffs)
    if not math.isfinite(rho) or n == 0:
        return 0.0
    k = np.arange(n)
    start = n // 2
    C = float(np.max(np.abs(coeffs[start:]) * rho ** k[start:].astype(float)))
    return C * rho ** (-float(n)) / math.sqrt(1.0 - rho ** (-2.0))


class AnalyticSeries(BaseModel):
    """Taylor coefficients at 0 of an H^2 function plus an l2 tail bound."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    __array_ufunc__ = None

    coeffs: np.ndarray
    tail_bound: float = Field(default=0.0, ge=0.0)
    source: SeriesSource = SeriesSource.EXPLICIT
    rational: Optional[RationalFn] = None
    blaschke: Optional[BlaschkeProduct] = None

    @field_validator("coeffs", mode="before")
    @classmethod
    def _freeze(cls, v: Any) -> np.ndarray:
        arr = as_coefficients(v).copy()
        arr.setflags(write=False)
        return arr

    @classmethod
    def from_polynomial(cls, p: ComplexPoly) -> "AnalyticSeries":
        coeffs = p.coeffs if not p.is_zero else np.zeros(1, dtype=np.complex128)
        return cls(coeffs=coeffs, source=SeriesSource.POLYNOMIAL)

    @classmethod
    def from_rational(cls, f: RationalFn, n_terms: Optional[int] = None) -> "AnalyticSeries":
        if f.is_polynomial:
            return cls(
                coeffs=f.num.coeffs / f.den.coeffs[0] if not f.is_zero else [0.0],
                source=SeriesSource.RATIONAL,
                rational=f,
            )
        rho = f.pole_radius()
        n = n_terms or terms_for_radius(rho, f.num.degree)
        coeffs = f.power_series(n)
        return cls(
            coeffs=coeffs,
            tail_bound=geometric_tail(coeffs, rho),
            source=SeriesSource.RATIONAL,
            rational=f,
        )

    @classmethod
    def from_blaschke(cls, B: BlaschkeProduct, n_terms: Optional[int] = None) -> "AnalyticSeries":
        num, den = B.to_rational_parts()
        series = cls.from_rational(RationalFn(num=num, den=den), n_terms)
        return series.model_copy(update={"source": SeriesSource.BLASCHKE, "blaschke": B})

    @classmethod
    def from_coefficients(cls, coeffs: Iterable[complex], tail_bound: float = 0.0) -> "AnalyticSeries":
        return cls(coeffs=list(coeffs), tail_bound=tail_bound)

    @property
    def n_terms(self) -> int:
        return len(self.coeffs)

    @property
    def decay_ratio(self) -> Optional[float]:
        """1/rho for closed-form sources with poles, else None."""
        if self.rational is None or self.rational.is_polynomial:
            return None
        return 1.0 / self.rational.pole_radius()

    @property
    def is_exact(self) -> bool:
        return self.tail_bound == 0.0

    def as_polynomial(self) -> ComplexPoly:
        return ComplexPoly(self.coeffs)

    def __call__(self, z: Any) -> Any:
        if self.source == SeriesSource.BLASCHKE and self.blaschke is not None:
            return blaschke_eval(self.blaschke, z)
        if self.rational is not None:
            return self.rational(z)
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def jet_at(self, zeta: complex, order: int) -> np.ndarray:
        """f^(j)(zeta)/j! for j = 0..order."""
        if self.source == SeriesSource.BLASCHKE and self.blaschke is not None:
            try:
                return blaschke_jet(self.blaschke, zeta, order)
            except PoleProximityError as e:
                raise SingularityError(f"Blaschke product is singular at {zeta}") from e
        if self.rational is not None:
            return self.rational.taylor_at(zeta, order)
        if not self.is_exact:
            logger.warning(
                f"Jet at {zeta} of a truncated explicit series (tail {self.tail_bound:.2e})"
            )
        return self.as_polynomial().taylor_at(zeta, order)

    def norm_h2(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2)))

    def times_factor(self, lam: complex) -> "AnalyticSeries":
        """Product with the normalized Blaschke factor at lam."""
        lam = as_disk_point(lam, "lambda")
        if self.source == SeriesSource.BLASCHKE and self.blaschke is not None:
            return AnalyticSeries.from_blaschke(self.blaschke.with_zero(lam))
        factor = BlaschkeProduct.from_points([lam])
        num, den = factor.to_rational_parts()
        if self.rational is not None or self.source == SeriesSource.POLYNOMIAL:
            base = self.rational if self.rational is not None else RationalFn(num=self.as_polynomial())
            return AnalyticSeries.from_rational(base * RationalFn(num=num, den=den))
        factor_series = AnalyticSeries.from_blaschke(factor, n_terms=self.n_terms)
        coeffs = np.convolve(self.coeffs, factor_series.coeffs)[: self.n_terms]
        # |phi| <= 1 on the circle
        return AnalyticSeries(coeffs=coeffs, tail_bound=self.tail_bound + factor_series.tail_bound)

    def __repr__(self) -> str:
        return (
            f"AnalyticSeries(source={self.source.value}, n_terms={self.n_terms}, "
            f"tail_bound={self.tail_bound:.2e})"
        )
