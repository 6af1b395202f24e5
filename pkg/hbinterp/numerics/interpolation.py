"""
Interpolating sequences for H(b).

Carleson constant and separation, the boundary sum condition at every zero
of the mate, the decision report with the closed-form verdict for
parametric families, the constructive multiplier interpolant and the
add-a-point correction.
"""

import logging
import math
from enum import Enum
from typing import Any, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from hbinterp.core.config import GRIDS, TOL
from hbinterp.core.errors import DomainError, FactorizationError, PreconditionError
from hbinterp.numerics.disk import BlaschkeProduct, DiskSequence, as_complex, as_disk_point
from hbinterp.numerics.families import AngleMode, RadiiKind, SequenceFamily, SeriesClass, classify_radii
from hbinterp.numerics.hb_space import HbDecomposition, decompose
from hbinterp.numerics.pair import BoundaryZeroSet, RationalPair
from hbinterp.numerics.pick import NpSolution, np_solve
from hbinterp.numerics.polynomials import ComplexPoly, root_clusters
from hbinterp.numerics.rational import RationalFn
from hbinterp.numerics.series import AnalyticSeries


logger = logging.getLogger(__name__)

DUPLICATE_TOL = 1e-10


class Verdict(str, Enum):
    INTERPOLATING = "interpolating"
    NOT_INTERPOLATING = "not interpolating"
    INDETERMINATE = "indeterminate"
    FINITE = "interpolating (finite)"


class CarlesonReport(BaseModel):
    """inf_n prod_{k != n} rho(l_n, l_k) and the separation constant."""

    model_config = ConfigDict(frozen=True)

    delta: float
    separation: float
    argmin_index: int


class ZeroSum(BaseModel):
    """Partial sums of (1 - |l_n|^2)/|zeta - l_n|^(2m) at one boundary zero."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    zeta: complex
    m: int
    truncations: List[int]
    partial_sums: List[float]
    classification: SeriesClass


class SumConditionReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    per_zero: List[ZeroSum]


class DecisionReport(BaseModel):
    """Carleson and sum diagnostics with the verdict."""

    model_config = ConfigDict(frozen=True)

    carleson: CarlesonReport
    carleson_truncations: List[int]
    carleson_deltas: List[float]
    carleson_class: SeriesClass
    sums: SumConditionReport
    verdict: Verdict
    reason: str


def _pseudo_hyperbolic_matrix(points: np.ndarray) -> np.ndarray:
    num = np.abs(points[:, None] - points[None, :])
    den = np.abs(1.0 - points[:, None] * np.conj(points)[None, :])
    return num / den


def carleson_delta(seq: DiskSequence) -> CarlesonReport:
    """
    Exact finite Carleson constant (singletons give delta = 1).

    Raises:
        DomainError: two points coincide
    """
    pts = seq.points
    if len(pts) <= 1:
        return CarlesonReport(delta=1.0, separation=1.0, argmin_index=0)
    rho = _pseudo_hyperbolic_matrix(pts)
    np.fill_diagonal(rho, 1.0)
    if rho.min() <= DUPLICATE_TOL:
        i, j = np.unravel_index(int(np.argmin(rho)), rho.shape)
        raise DomainError(f"Sequence points {i} and {j} coincide")
    log_products = np.sum(np.log(rho), axis=1)
    k = int(np.argmin(log_products))
    return CarlesonReport(
        delta=float(np.exp(log_products[k])), separation=float(rho.min()), argmin_index=k
    )


def doubling_truncations(n: int) -> List[int]:
    """1, 2, 4, ... up to n, always ending with n."""
    out = []
    t = 1
    while t <= n:
        out.append(t)
        t *= 2
    if not out or out[-1] != n:
        out.append(n)
    return out


def _at_zero(family: SequenceFamily, zeta: complex) -> bool:
    angle = (family.angles.values or [0.0])[0]
    return abs(np.exp(1j * angle) - zeta) <= TOL.boundary_root


def classify_family_sum(family: Optional[SequenceFamily], zeta: complex, m: int) -> SeriesClass:
    """
    Convergence of sum_n (1 - r_n^2)/|zeta - l_n|^(2m) for the infinite family.

    Steinhaus angles: almost surely convergent iff sum (1 - r_n)^(1/2m) < oo.
    A constant fixed angle pointing at zeta diverges; pointing elsewhere it
    behaves like sum (1 - r_n).
    """
    if family is None or family.kind == RadiiKind.EXPLICIT:
        return SeriesClass.FINITE
    if family.angles.mode == AngleMode.STEINHAUS:
        return classify_radii(family, 1.0 / (2 * m))
    if not family.angles.is_constant:
        return SeriesClass.INDETERMINATE
    if _at_zero(family, zeta):
        return SeriesClass.DIVERGENT
    return classify_radii(family, 1.0)


def classify_family_carleson(family: Optional[SequenceFamily]) -> SeriesClass:
    """CONVERGENT when the family satisfies the Carleson condition (a.s. for Steinhaus)."""
    if family is None or family.kind == RadiiKind.EXPLICIT:
        return SeriesClass.FINITE
    if family.angles.mode == AngleMode.STEINHAUS:
        # dyadic counts N_k ~ 2^(k/beta): sum N_k^2 2^-k < oo iff beta > 2
        if family.kind == RadiiKind.GEOMETRIC:
            return SeriesClass.CONVERGENT
        return classify_radii(family, 0.5)
    if not family.angles.is_constant:
        return SeriesClass.INDETERMINATE
    # radial sequences are separated only with geometric radii
    return SeriesClass.CONVERGENT if family.kind == RadiiKind.GEOMETRIC else SeriesClass.DIVERGENT


def sum_condition(seq: DiskSequence, zeros: BoundaryZeroSet) -> SumConditionReport:
    """Per-zero partial sums at truncations 1, 2, 4, ... and the family classification."""
    pts = seq.points
    truncations = doubling_truncations(len(pts))
    per_zero = []
    for zeta, m in zeros.items():
        terms = (1.0 - np.abs(pts) ** 2) / np.abs(zeta - pts) ** (2 * m)
        cumulative = np.cumsum(terms)
        per_zero.append(
            ZeroSum(
                zeta=zeta,
                m=m,
                truncations=truncations,
                partial_sums=[float(cumulative[t - 1]) for t in truncations],
                classification=classify_family_sum(seq.family, zeta, m),
            )
        )
    return SumConditionReport(per_zero=per_zero)


def decide(pair: RationalPair, seq: DiskSequence) -> DecisionReport:
    """Diagnostics and verdict (families only; explicit sets are finite)."""
    truncations = doubling_truncations(len(seq))
    deltas = [carleson_delta(seq.truncate(t)).delta for t in truncations]
    carleson = carleson_delta(seq)
    sums = sum_condition(seq, pair.zeros)
    carleson_class = classify_family_carleson(seq.family)
    classes = [z.classification for z in sums.per_zero]

    if seq.family is None or seq.family.kind == RadiiKind.EXPLICIT:
        verdict, reason = Verdict.FINITE, "finite sets of distinct points are interpolating"
    elif carleson_class == SeriesClass.INDETERMINATE or SeriesClass.INDETERMINATE in classes:
        verdict, reason = Verdict.INDETERMINATE, "no closed form for this angular law"
    elif carleson_class != SeriesClass.CONVERGENT:
        verdict, reason = Verdict.NOT_INTERPOLATING, "Carleson condition fails"
    elif any(c in (SeriesClass.DIVERGENT, SeriesClass.BOUNDARY) for c in classes):
        bad = [z for z in sums.per_zero if z.classification != SeriesClass.CONVERGENT]
        verdict = Verdict.NOT_INTERPOLATING
        reason = f"sum condition diverges at zeta = {bad[0].zeta}"
    else:
        verdict, reason = Verdict.INTERPOLATING, "Carleson condition and every sum condition hold"
    if SeriesClass.BOUNDARY in classes:
        logger.warning("Sum condition is at its logarithmic boundary case")
    logger.info(f"Decision: {verdict.value} ({reason})")
    return DecisionReport(
        carleson=carleson,
        carleson_truncations=truncations,
        carleson_deltas=deltas,
        carleson_class=carleson_class,
        sums=sums,
        verdict=verdict,
        reason=reason,
    )


def _blaschke_rational(points: Iterable[complex]) -> RationalFn:
    num, den = BlaschkeProduct.from_points(list(points)).to_rational_parts()
    return RationalFn(num=num, den=den)


class Correction(BaseModel):
    """c a(z) B(z) added by add_point."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coefficient: complex
    blaschke: BlaschkeProduct


class MultiplierInterpolant(BaseModel):
    """
    F = B_1 (B - p_N) f_1 + a h_1 + sum_i c_i a B_i, evaluated factor by factor.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a: RationalFn
    B: BlaschkeProduct
    B1: BlaschkeProduct
    p_N: ComplexPoly
    f1: Optional[NpSolution] = None
    h1: Optional[NpSolution] = None
    corrections: List[Correction] = []

    def __call__(self, z: Any) -> Any:
        z = np.asarray(z, dtype=np.complex128)
        value = np.zeros_like(z)
        if self.f1 is not None:
            value = value + self.B1(z) * (self.B(z) - self.p_N(z)) * self.f1(z)
        if self.h1 is not None:
            value = value + self.a(z) * self.h1(z)
        for c in self.corrections:
            value = value + c.coefficient * self.a(z) * c.blaschke(z)
        return value[()]

    def to_rational(self) -> RationalFn:
        F = RationalFn(num=ComplexPoly.zero())
        if self.f1 is not None and not self.f1.f.is_zero:
            B = _blaschke_rational(self.B.points)
            B1 = _blaschke_rational(self.B1.points)
            F = F + B1 * (B - self.p_N) * self.f1.f
        if self.h1 is not None and not self.h1.f.is_zero:
            F = F + self.a * self.h1.f
        for c in self.corrections:
            F = F + self.a * _blaschke_rational(c.blaschke.points) * c.coefficient
        return F


class InterpolantCertificate(BaseModel):
    """Constructed multiplier with its checks."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    F: RationalFn
    interpolant: MultiplierInterpolant
    boundary_sup: float
    value_residuals: List[float]
    rational_consistency: float
    decomposition: HbDecomposition
    split: Tuple[int, int, int]
    eta: List[complex]
    tol: float

    @property
    def failures(self) -> List[str]:
        """Failed checks; empty when the certificate holds."""
        failures = []
        if not math.isfinite(self.boundary_sup):
            failures.append(f"sup |F| on the circle is {self.boundary_sup}")
        scale = max(1.0, self.boundary_sup) if math.isfinite(self.boundary_sup) else 1.0
        worst = max(self.value_residuals, default=0.0)
        if not worst <= self.tol:
            failures.append(f"value residual {worst:.3e} > {self.tol:g}")
        if not self.rational_consistency <= self.tol * scale:
            failures.append(f"closed form differs from the interpolant by {self.rational_consistency:.3e}")
        p_size = float(np.max(np.abs(self.decomposition.p.coeffs), initial=0.0))
        if not p_size <= self.tol * scale:
            failures.append(f"polynomial part of F has size {p_size:.3e}, F is not in a H^2")
        return failures

    @property
    def passed(self) -> bool:
        return not self.failures


def add_point(
    F: RationalFn, pair: RationalPair, B: BlaschkeProduct, lam0: Any, v0: Any
) -> RationalFn:
    """
    F + a B / (a(l0) B(l0)) (v0 - F(l0)).

    The correction vanishes on the zeros of B, so F is unchanged there.

    Raises:
        PreconditionError: |a(l0) B(l0)| < 1e-12
    """
    lam0 = as_disk_point(lam0, "lambda0")
    v0 = as_complex(v0, "v0")
    coefficient = _correction_coefficient(F(lam0), pair, B, lam0, v0)
    if coefficient == 0:
        return F
    return F + pair.a * _blaschke_rational(B.points) * coefficient


def _correction_coefficient(
    current: complex, pair: RationalPair, B: BlaschkeProduct, lam0: complex, v0: complex
) -> complex:
    scale = complex(pair.a(lam0)) * complex(B(lam0))
    if abs(scale) < 1e-12:
        raise PreconditionError(f"a(l0) B(l0) = {scale} is too small to add the point {lam0}")
    return (v0 - complex(current)) / scale


def _split(
    points: np.ndarray, p_N: ComplexPoly, zeros: BoundaryZeroSet
) -> Tuple[List[int], List[int], List[int], List[complex]]:
    """Indices of (Lambda_1, Lambda_2, Lambda_0) and the circle zeros eta of p_N."""
    roots = root_clusters(p_N) if p_N.degree >= 1 else []
    eta = [r / abs(r) for r, _ in roots if abs(abs(r) - 1.0) <= TOL.boundary_root]
    near_root = [
        any(abs(lam - r) <= TOL.boundary_root for r, _ in roots) for lam in points
    ]

    lambda1: List[int] = []
    if eta:
        delta = min(abs(e - zeta) for e in eta for zeta, _ in zeros.items())
        for i, lam in enumerate(points):
            if min(abs(lam - e) for e in eta) < delta / 2:
                lambda1.append(i)
    lambda0 = [i for i in range(len(points)) if i not in lambda1 and near_root[i]]
    lambda2 = [i for i in range(len(points)) if i not in lambda1 and i not in lambda0]
    return lambda1, lambda2, lambda0, eta


def construct_multiplier(
    pair: RationalPair,
    seq: DiskSequence,
    values: Iterable[complex],
    grid_size: Optional[int] = None,
    tol: Optional[float] = None,
) -> InterpolantCertificate:
    """
    Multiplier F in a H^2 + 0 with F(l_n) = v_n.

    B_Lambda = a0 g + p_N; points near the circle zeros eta of p_N (Lambda_1)
    are interpolated by h = a h_1, the others by B_1 (B - p_N) f_1, and
    points on zeros of p_N are added one by one.

    Raises:
        FactorizationError: |p_N(zeta_j)| differs from 1 by more than 1e-6
    """
    v = np.asarray(list(values), dtype=np.complex128)
    pts = seq.points
    if len(v) != len(pts):
        raise DomainError(f"{len(v)} values for {len(pts)} points")
    carleson_delta(seq)

    B = BlaschkeProduct(zeros=seq)
    decomposition = decompose(AnalyticSeries.from_blaschke(B), pair)
    p_N = decomposition.p
    for zeta, _ in pair.zeros.items():
        if abs(abs(p_N(zeta)) - 1.0) > 1e-6:
            raise FactorizationError(f"|p_N({zeta})| = {abs(p_N(zeta)):.9g} is not 1")

    lambda1, lambda2, lambda0, eta = _split(pts, p_N, pair.zeros)
    logger.info(
        f"Split of {len(pts)} points: {len(lambda1)} near circle zeros of p_N, "
        f"{len(lambda2)} regular, {len(lambda0)} on zeros of p_N"
    )
    B1 = BlaschkeProduct.from_points(pts[lambda1])

    h1 = None
    if lambda1:
        h1 = np_solve(pts[lambda1], v[lambda1] / pair.a(pts[lambda1]), grid_size)

    def h(z: np.ndarray) -> np.ndarray:
        return pair.a(z) * h1(z) if h1 is not None else np.zeros_like(z)

    f1 = None
    if lambda2:
        z2 = pts[lambda2]
        u = -(v[lambda2] - h(z2)) / (B1(z2) * p_N(z2))
        f1 = np_solve(z2, u, grid_size)

    interpolant = MultiplierInterpolant(a=pair.a, B=B, B1=B1, p_N=p_N, f1=f1, h1=h1)
    for i in lambda0:
        others = BlaschkeProduct.from_points(np.delete(pts, i))
        c = _correction_coefficient(interpolant(pts[i]), pair, others, pts[i], v[i])
        interpolant = interpolant.model_copy(
            update={"corrections": interpolant.corrections + [Correction(coefficient=c, blaschke=others)]}
        )

    return certify_interpolant(
        interpolant,
        pair,
        pts,
        v,
        (len(lambda1), len(lambda2), len(lambda0)),
        eta,
        grid_size=grid_size,
        tol=tol,
    )


def certify_interpolant(
    interpolant: MultiplierInterpolant,
    pair: RationalPair,
    points: np.ndarray,
    values: np.ndarray,
    split: Tuple[int, int, int],
    eta: Sequence[complex] = (),
    F: Optional[RationalFn] = None,
    grid_size: Optional[int] = None,
    tol: Optional[float] = None,
) -> InterpolantCertificate:
    """Checks a multiplier interpolant against its closed form F (default interpolant.to_rational())."""
    grid_size = GRIDS.boundary if grid_size is None else grid_size
    tol = TOL.interpolation_residual if tol is None else tol
    F = interpolant.to_rational() if F is None else F
    residuals = np.abs(interpolant(points) - values) if len(points) else np.zeros(0)
    circle = np.exp(2j * np.pi * np.arange(grid_size) / grid_size)
    consistency = float(np.max(np.abs(F(circle) - interpolant(circle))))
    sup = float(np.max(np.abs(interpolant(circle))))
    certificate = InterpolantCertificate(
        F=F,
        interpolant=interpolant,
        boundary_sup=sup,
        value_residuals=residuals.tolist(),
        rational_consistency=consistency,
        decomposition=decompose(AnalyticSeries.from_rational(F), pair),
        split=split,
        eta=[complex(e) for e in eta],
        tol=tol,
    )
    for failure in certificate.failures:
        logger.warning(f"Multiplier check failed: {failure}")
    return certificate
