"""
Complex polynomials in ascending coefficient order.

ComplexPoly is the atom for b, a, the Hermite part p of a decomposition and
every Taylor jet. Roots are found by simultaneous Aberth-Ehrlich iteration
followed by multiplicity clustering.
"""

import logging
from typing import Any, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as P
from pydantic import BaseModel, ConfigDict, field_validator

from hbinterp.core.config import TOL
from hbinterp.core.errors import DomainError, NonConvergenceError, PreconditionError


logger = logging.getLogger(__name__)

Scalar = Union[complex, float, int]

_EPS = np.finfo(float).eps

# Radii tried, in order, when merging nearby root approximations.
_CLUSTER_LADDER = (1.0, 10.0, 1e2, 1e3, 1e4, 3e4, 1e5)


def as_coefficients(values: Any) -> np.ndarray:
    """Converts input to a finite 1-D complex array (no trimming)."""
    arr = np.atleast_1d(np.asarray(values, dtype=np.complex128))
    if arr.ndim != 1:
        raise DomainError(f"Coefficients must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("Coefficients must be finite")
    return arr


def trim_coefficients(coeffs: np.ndarray) -> np.ndarray:
    """Drops exactly-zero trailing coefficients."""
    nonzero = np.flatnonzero(coeffs)
    if nonzero.size == 0:
        return coeffs[:0]
    return coeffs[: nonzero[-1] + 1]


class ComplexPoly(BaseModel):
    """
    Complex polynomial sum_k coeffs[k] z^k.

    The coefficient array is trimmed of exact trailing zeros; an empty array
    is the zero polynomial (degree -1).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    # numpy defers to the reflected operators below
    __array_ufunc__ = None

    coeffs: np.ndarray

    @field_validator("coeffs", mode="before")
    @classmethod
    def _normalize(cls, v: Any) -> np.ndarray:
        arr = trim_coefficients(as_coefficients(v)).copy()
        arr.setflags(write=False)
        return arr

    def __init__(self, coeffs: Any = (), **kwargs: Any) -> None:
        super().__init__(coeffs=coeffs, **kwargs)

    @classmethod
    def constant(cls, value: Scalar) -> "ComplexPoly":
        return cls([value])

    @classmethod
    def zero(cls) -> "ComplexPoly":
        return cls([])

    @classmethod
    def from_roots(cls, roots: Sequence[Scalar], leading: Scalar = 1.0) -> "ComplexPoly":
        """Polynomial leading * prod (z - r)."""
        if len(roots) == 0:
            return cls([leading])
        return cls(P.polyfromroots(np.asarray(roots, dtype=np.complex128)) * leading)

    @classmethod
    def linear_power(cls, zeta: Scalar, m: int) -> "ComplexPoly":
        """(z - zeta)^m."""
        return cls(P.polypow(np.array([-zeta, 1.0], dtype=np.complex128), m))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def __call__(self, z: Any) -> Any:
        if self.is_zero:
            return np.zeros_like(np.asarray(z, dtype=np.complex128))[()]
        return P.polyval(z, self.coeffs)

    def __add__(self, other: Any) -> "ComplexPoly":
        if isinstance(other, ComplexPoly):
            return ComplexPoly(P.polyadd(_nonempty(self), _nonempty(other)))
        return ComplexPoly(P.polyadd(_nonempty(self), [other]))

    __radd__ = __add__

    def __neg__(self) -> "ComplexPoly":
        return ComplexPoly(-self.coeffs)

    def __sub__(self, other: Any) -> "ComplexPoly":
        return self + (-other)

    def __rsub__(self, other: Any) -> "ComplexPoly":
        return (-self) + other

    def __mul__(self, other: Any) -> "ComplexPoly":
        if isinstance(other, ComplexPoly):
            if self.is_zero or other.is_zero:
                return ComplexPoly.zero()
            return ComplexPoly(np.convolve(self.coeffs, other.coeffs))
        if isinstance(other, (int, float, complex, np.number)):
            return ComplexPoly(self.coeffs * other)
        return NotImplemented

    __rmul__ = __mul__

    def derivative(self, m: int = 1) -> "ComplexPoly":
        if self.degree < m:
            return ComplexPoly.zero()
        return ComplexPoly(P.polyder(self.coeffs, m))

    def scaled_argument(self, c: Scalar) -> "ComplexPoly":
        """Coefficients of p(c z)."""
        return ComplexPoly(self.coeffs * np.power(complex(c), np.arange(len(self.coeffs))))

    def reflect(self, degree: int = -1) -> "ComplexPoly":
        """z^d conj(p(1/conj z)) with d = degree (defaults to deg p)."""
        d = self.degree if degree < 0 else degree
        padded = np.zeros(d + 1, dtype=np.complex128)
        padded[: len(self.coeffs)] = self.coeffs
        return ComplexPoly(np.conj(padded[::-1]))

    def shift(self, zeta: Scalar) -> np.ndarray:
        """Coefficients of w -> p(zeta + w): the Taylor coefficients at zeta."""
        a = np.array(self.coeffs, dtype=np.complex128)
        n = len(a) - 1
        zeta = complex(zeta)
        # Horner-style Taylor shift
        for i in range(n):
            for j in range(n - 1, i - 1, -1):
                a[j] += zeta * a[j + 1]
        return a

    def taylor_at(self, zeta: Scalar, order: int) -> np.ndarray:
        """Taylor coefficients c_0..c_order of p at zeta (zero padded)."""
        out = np.zeros(order + 1, dtype=np.complex128)
        if self.is_zero:
            return out
        shifted = self.shift(zeta)
        k = min(order + 1, len(shifted))
        out[:k] = shifted[:k]
        return out

    def divide_linear(self, zeta: Scalar) -> Tuple["ComplexPoly", complex]:
        """Synthetic division by (z - zeta): returns (quotient, remainder)."""
        if self.is_zero:
            return ComplexPoly.zero(), 0j
        quotient, remainder = P.polydiv(self.coeffs, np.array([-zeta, 1.0], dtype=np.complex128))
        rem = complex(remainder[0]) if len(remainder) else 0j
        return ComplexPoly(quotient), rem

    def norm_h2(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2)))

    def magnitude_scale(self, z: Any) -> Any:
        """sum_k |c_k| |z|^k, the natural scale of evaluating p at z."""
        return P.polyval(np.abs(z), np.abs(self.coeffs)) if not self.is_zero else 0.0

    def laurent_modulus_squared(self, degree: int) -> np.ndarray:
        """
        Laurent coefficients c_{-d}..c_d of |p(e^{it})|^2 padded to d = degree.
        """
        padded = np.zeros(degree + 1, dtype=np.complex128)
        padded[: len(self.coeffs)] = self.coeffs
        return np.convolve(padded, np.conj(padded[::-1]))

    def roots(self) -> np.ndarray:
        return poly_roots(self)

    def __repr__(self) -> str:
        return f"ComplexPoly({np.array2string(self.coeffs, precision=6)})"


def _nonempty(p: ComplexPoly) -> np.ndarray:
    return p.coeffs if len(p.coeffs) else np.zeros(1, dtype=np.complex128)


def _aberth(monic: np.ndarray, max_iter: int) -> Tuple[np.ndarray, bool]:
    """Aberth-Ehrlich iteration on a monic ascending coefficient array."""
    n = len(monic) - 1
    deriv = P.polyder(monic)
    abs_coeffs = np.abs(monic)

    # initial guesses on a circle of the roots' geometric mean modulus
    radius = abs(monic[0]) ** (1.0 / n)
    angles = 2 * np.pi * np.arange(n) / n + 0.4
    x = radius * np.exp(1j * angles)

    for iteration in range(max_iter):
        pv = P.polyval(x, monic)
        dpv = P.polyval(x, deriv)
        scale = P.polyval(np.abs(x), abs_coeffs)
        done = np.abs(pv) <= 64 * _EPS * scale

        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(pv == 0, 0.0, pv / np.where(dpv == 0, _EPS * scale, dpv))
            diff = x[:, None] - x[None, :]
            np.fill_diagonal(diff, np.inf)
            repulsion = np.sum(1.0 / diff, axis=1)
            step = ratio / (1.0 - ratio * repulsion)
        step = np.where(np.isfinite(step), step, 0.0)
        step[done] = 0.0

        x = x - step
        if np.all(done | (np.abs(step) <= 2 * _EPS * np.abs(x))):
            logger.debug(f"Aberth converged in {iteration + 1} iterations (degree {n})")
            return x, True

    return x, False


def cluster_roots(
    roots: np.ndarray, radius: Optional[float] = None
) -> List[Tuple[complex, int]]:
    """Groups approximations lying within `radius` of each other (single linkage)."""
    radius = TOL.cluster_radius if radius is None else radius
    remaining = list(range(len(roots)))
    clusters: List[Tuple[complex, int]] = []
    while remaining:
        members = [remaining.pop(0)]
        grew = True
        while grew:
            grew = False
            for idx in list(remaining):
                if np.min(np.abs(roots[members] - roots[idx])) <= radius:
                    members.append(idx)
                    remaining.remove(idx)
                    grew = True
        clusters.append((complex(np.mean(roots[members])), len(members)))
    return clusters


def _merge_clusters(
    p: ComplexPoly, clusters: List[Tuple[complex, int]], radius: float, residual: float
) -> List[Tuple[complex, int]]:
    """Merges clusters within `radius` whose weighted mean is itself a root."""
    merged = list(clusters)
    changed = True
    while changed:
        changed = False
        for i in range(len(merged)):
            for j in range(i + 1, len(merged)):
                (ci, mi), (cj, mj) = merged[i], merged[j]
                if abs(ci - cj) > radius:
                    continue
                centre = (mi * ci + mj * cj) / (mi + mj)
                if abs(p(centre)) <= residual * p.magnitude_scale(centre):
                    merged[i] = (centre, mi + mj)
                    del merged[j]
                    changed = True
                    break
            if changed:
                break
    return merged


def root_clusters(
    p: ComplexPoly,
    *,
    max_iter: Optional[int] = None,
    cluster_radius: Optional[float] = None,
    residual: Optional[float] = None,
) -> List[Tuple[complex, int]]:
    """
    Distinct roots of p with multiplicities.

    Approximations closer than `cluster_radius` are merged; larger groups
    (high multiplicity roots spread by rounding) are merged on a widening
    ladder of radii as long as the merged centre is still a root to the
    residual tolerance.

    Raises:
        PreconditionError: degree < 1
        NonConvergenceError: the iteration left a residual above tolerance
    """
    if p.degree < 1:
        raise PreconditionError(f"poly_roots needs degree >= 1, got {p.degree}")
    max_iter = TOL.root_max_iter if max_iter is None else max_iter
    cluster_radius = TOL.cluster_radius if cluster_radius is None else cluster_radius
    residual = TOL.root_residual if residual is None else residual

    coeffs = p.coeffs
    n_zero = int(np.flatnonzero(coeffs)[0])
    reduced = coeffs[n_zero:]
    n = len(reduced) - 1

    approximations: List[complex] = [0j] * n_zero
    if n == 1:
        approximations.append(-reduced[0] / reduced[1])
    elif n > 1:
        found, converged = _aberth(reduced / reduced[-1], max_iter)
        if not converged:
            logger.debug(f"Aberth reached the iteration cap {max_iter} (degree {n})")
        approximations.extend(found.tolist())

    roots = np.asarray(approximations, dtype=np.complex128)
    clusters = cluster_roots(roots, cluster_radius)
    for factor in _CLUSTER_LADDER[1:]:
        clusters = _merge_clusters(p, clusters, cluster_radius * factor, residual)

    bad = [
        c for c, _ in clusters if abs(p(c)) > residual * max(p.magnitude_scale(c), _EPS)
    ]
    if bad:
        raise NonConvergenceError(
            f"Root finder left residuals above {residual:g} at {len(bad)} root(s)",
            last_values=bad,
        )

    clusters.sort(key=lambda cm: (round(abs(cm[0]), 12), np.angle(cm[0])))
    return clusters


def poly_roots(p: ComplexPoly, **kwargs: Any) -> np.ndarray:
    """
    All complex roots of p, repeated according to multiplicity.

    Args:
        p: polynomial of degree >= 1
        **kwargs: forwarded to root_clusters (max_iter, cluster_radius, residual)

    Returns:
        Array of deg(p) roots
    """
    clusters = root_clusters(p, **kwargs)
    return np.array([c for c, m in clusters for _ in range(m)], dtype=np.complex128)
