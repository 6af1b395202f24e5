"""
The space H(b) of a rational pair.

H(b) = a0 H^2 + P_{N-1} with a0 = prod (z - zeta_j)^m_j: decomposition of a
function, the equivalent norm, local Dirichlet energies D_zeta^N along the
coefficient path (synthetic division) and the integral path (quadrature),
reproducing kernels with Gram diagnostics, and membership in Toeplitz
ranges M(conj a).

All zeta-local computations rotate zeta to 1.
"""

import logging
import math
from typing import Any, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as P
from pydantic import BaseModel, ConfigDict
from scipy.linalg import eigvalsh, svd
from scipy.optimize import brentq

from hbinterp.core.config import GRIDS, TOL
from hbinterp.core.errors import (
    DivisionResidualError,
    NonConvergenceError,
    PreconditionError,
    SingularityError,
)
from hbinterp.numerics.disk import (
    BlaschkeProduct,
    DiskSequence,
    ahern_clark_sum,
    as_circle_point,
    as_disk_point,
    blaschke_eval,
    blaschke_jet,
)
from hbinterp.numerics.pair import BoundaryZeroSet, RationalPair
from hbinterp.numerics.polynomials import ComplexPoly
from hbinterp.numerics.rational import RationalFn
from hbinterp.numerics.series import AnalyticSeries, SeriesSource


logger = logging.getLogger(__name__)

# Extra Taylor orders used next to the boundary point in the quadrature.
_LOCAL_ORDER = 20


class NormEstimate(BaseModel):
    """Value with an absolute error bar from truncated tails."""

    model_config = ConfigDict(frozen=True)

    value: float
    error: float = 0.0


class HbDecomposition(BaseModel):
    """f = a0 g + p with deg p <= N - 1."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    g: AnalyticSeries
    p: ComplexPoly
    a0: ComplexPoly
    reconstruction_error: float = 0.0


class GramReport(BaseModel):
    """Normalized Gram matrix of reproducing kernels."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray
    min_eig: float
    max_eig: float
    diag_norms: np.ndarray


class MembershipResidual(BaseModel):
    model_config = ConfigDict(frozen=True)

    truncation: int
    residual: float
    preimage_norm: float
    budget: float
    rank_deficient: bool = False


class MembershipCurve(BaseModel):
    """Residuals of the Toeplitz range problem at doubling truncations."""

    model_config = ConfigDict(frozen=True)

    truncations: List[int]
    residuals: List[float]
    preimage_norms: List[float]
    budget: float
    floor: float


class PartialProductBound(BaseModel):
    """D_zeta^N(B_n) against sum_k (1 - |l_k|^2)/|zeta - l_k|^(2N)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    energies: np.ndarray
    sums: np.ndarray
    ratios: np.ndarray


def _zero_set(zeros: Union[RationalPair, BoundaryZeroSet]) -> BoundaryZeroSet:
    return zeros.zeros if isinstance(zeros, RationalPair) else zeros


def kernel_kb(pair: RationalPair, w: Any, z: Any) -> complex:
    """k_w^b(z) = (1 - conj(b(w)) b(z)) / (1 - conj(w) z)."""
    w = as_disk_point(w, "w")
    z = as_disk_point(z, "z")
    den = 1.0 - w.conjugate() * z
    if abs(den) < TOL.pole_guard:
        raise PreconditionError(f"Kernel denominator vanishes at w={w}, z={z}")
    return complex((1.0 - np.conj(pair.b(w)) * pair.b(z)) / den)


def _node_list(zeros: BoundaryZeroSet) -> List[complex]:
    return [zeta for zeta, m in zeros.items() for _ in range(m)]


def hermite_poly(f: AnalyticSeries, zeros: Union[RationalPair, BoundaryZeroSet]) -> ComplexPoly:
    """
    The p of degree < N matching the jets of f of order m_j at every zeta_j.

    Built from confluent divided differences in Newton form.

    Raises:
        SingularityError: f has a pole at some zeta_j
    """
    zeros = _zero_set(zeros)
    jets = {zeta: f.jet_at(zeta, m - 1) for zeta, m in zeros.items()}
    nodes = _node_list(zeros)
    n = len(nodes)
    if n == 0:
        return ComplexPoly.zero()

    # table[k][i] = f[z_i, ..., z_{i+k}]
    table = [np.array([jets[z][0] for z in nodes], dtype=np.complex128)]
    for k in range(1, n):
        prev = table[-1]
        row = np.empty(n - k, dtype=np.complex128)
        for i in range(n - k):
            if nodes[i] == nodes[i + k]:
                row[i] = jets[nodes[i]][k]
            else:
                row[i] = (prev[i + 1] - prev[i]) / (nodes[i + k] - nodes[i])
        table.append(row)

    p = ComplexPoly.zero()
    basis = ComplexPoly.constant(1.0)
    for k in range(n):
        p = p + basis * table[k][0]
        basis = basis * ComplexPoly([-nodes[k], 1.0])
    return p


def _divide_out(coeffs: np.ndarray, nodes: Sequence[complex], tol: float) -> np.ndarray:
    """Divides by prod (z - node) checking every remainder."""
    current = np.asarray(coeffs, dtype=np.complex128)
    for zeta in nodes:
        scale = max(float(np.sum(np.abs(current))), 1.0)
        if len(current) < 2:
            if abs(current[0]) > tol * scale:
                raise DivisionResidualError(f"Remainder {abs(current[0]):.3e} dividing by (z - {zeta})")
            return np.zeros(1, dtype=np.complex128)
        quotient, remainder = P.polydiv(current, np.array([-zeta, 1.0], dtype=np.complex128))
        rem = abs(remainder[0]) if len(remainder) else 0.0
        if rem > tol * scale:
            raise DivisionResidualError(
                f"Division by (z - {zeta}) left remainder {rem:.3e} (scale {scale:.3e})"
            )
        current = quotient
    return current


def _closed_form(f: AnalyticSeries) -> Optional[Tuple[ComplexPoly, ComplexPoly]]:
    if f.source == SeriesSource.BLASCHKE and f.blaschke is not None:
        return f.blaschke.to_rational_parts()
    if f.rational is not None:
        return f.rational.num, f.rational.den
    if f.source == SeriesSource.POLYNOMIAL:
        return f.as_polynomial(), ComplexPoly.constant(1.0)
    return None


def decompose(
    f: AnalyticSeries,
    pair: Union[RationalPair, BoundaryZeroSet],
    tol: Optional[float] = None,
) -> HbDecomposition:
    """
    f = a0 g + p with p = hermite_poly(f, zeros).

    Closed-form sources divide num - p den exactly and keep g rational;
    explicit series divide their truncated coefficients.

    Raises:
        SingularityError: f is not analytic at a boundary zero
        DivisionResidualError: a division remainder exceeds tol * scale
    """
    tol = TOL.division_residual if tol is None else tol
    zeros = _zero_set(pair)
    a0 = zeros.a0()
    p = hermite_poly(f, zeros)
    nodes = _node_list(zeros)

    closed = _closed_form(f)
    if closed is not None:
        num, den = closed
        residual = (num - p * den).coeffs
        quotient = _divide_out(residual if len(residual) else np.zeros(1), nodes, tol)
        g_fn = RationalFn(num=ComplexPoly(quotient), den=den)
        g = (
            AnalyticSeries.from_polynomial(ComplexPoly(quotient / den.coeffs[0]))
            if den.degree == 0
            else AnalyticSeries.from_rational(g_fn)
        )
    else:
        padded = np.array(f.coeffs, dtype=np.complex128)
        if len(padded) < len(p.coeffs):
            padded = np.pad(padded, (0, len(p.coeffs) - len(padded)))
        padded[: len(p.coeffs)] -= p.coeffs
        quotient = _divide_out(padded, nodes, tol)
        g = AnalyticSeries.from_coefficients(quotient, f.tail_bound * max(len(quotient), 1) ** len(nodes))

    z = 0.9 * np.exp(2j * np.pi * np.arange(64) / 64)
    target = f(z) if closed is not None else P.polyval(z, f.coeffs)
    rebuilt = a0(z) * g(z) + p(z)
    error = float(np.max(np.abs(rebuilt - target)))
    scale = max(float(np.max(np.abs(target))), 1.0)
    if error > 1e-8 * scale:
        raise DivisionResidualError(f"Decomposition does not reconstruct f (error {error:.3e})")
    logger.debug(f"Decomposed f: deg p = {p.degree}, |g| terms = {g.n_terms}, error {error:.2e}")
    return HbDecomposition(g=g, p=p, a0=a0, reconstruction_error=error)


def hb_norm(d: HbDecomposition) -> NormEstimate:
    """sqrt(||g||^2 + ||p||^2); the error bar is the tail bound of g."""
    g2 = d.g.norm_h2() ** 2
    p2 = d.p.norm_h2() ** 2
    return NormEstimate(value=math.sqrt(g2 + p2), error=d.g.tail_bound)


def _rotated_remainder(f: AnalyticSeries, zeta: complex, N: int) -> Tuple[np.ndarray, float]:
    """
    Coefficients of h(w) = (f(zeta w) - T_{N-1})/(w - 1)^N and a bound on
    the l2 error caused by truncation.
    """
    jets = f.jet_at(zeta, N - 1) * zeta ** np.arange(N)
    u = np.array(f.coeffs, dtype=np.complex128) * zeta ** np.arange(f.n_terms)

    taylor = ComplexPoly.zero()
    for j, t in enumerate(jets):
        taylor = taylor + ComplexPoly.linear_power(1.0, j) * t
    length = max(len(u), len(taylor.coeffs), N + 1)
    r = np.zeros(length, dtype=np.complex128)
    r[: len(u)] += u
    r[: len(taylor.coeffs)] -= taylor.coeffs

    h = _divide_out(r, [1.0] * N, TOL.division_residual)

    ratio = f.decay_ratio
    if f.tail_bound == 0.0:
        error = 0.0
    elif ratio is not None and ratio < 1.0:
        error = f.tail_bound * (1.0 / (1.0 - ratio)) ** N
    else:
        error = f.tail_bound * float(len(u)) ** N
    return h, error


def local_dirichlet_estimate(f: AnalyticSeries, zeta: Any, N: int) -> NormEstimate:
    """D_zeta^N(f) with the truncation error bar of ||h||."""
    zeta = as_circle_point(zeta)
    if N < 1:
        raise PreconditionError(f"N must be >= 1, got {N}")
    h, error = _rotated_remainder(f, zeta, N)
    return NormEstimate(value=float(np.sum(np.abs(h) ** 2)), error=error)


def local_dirichlet_norm(f: AnalyticSeries, zeta: Any, N: int) -> float:
    """
    D_zeta^N(f) = ||(f - T_{N-1}(f, zeta))/(z - zeta)^N||^2 (the squared quantity).

    Raises:
        SingularityError: f is not analytic at zeta
    """
    return local_dirichlet_estimate(f, zeta, N).value


def _pole_distance(B: BlaschkeProduct, zeta: complex) -> float:
    lam = B.points[B.points != 0]
    if lam.size == 0:
        return float("inf")
    return float(np.min(np.abs(1.0 / np.conj(lam) - zeta)))


def dirichlet_blaschke_quadrature(
    B: BlaschkeProduct,
    zeta: Any,
    N: int,
    grid: Optional[int] = None,
    cap: Optional[int] = None,
    rel: Optional[float] = None,
) -> float:
    """
    D_zeta^N(B) as the mean of |(B - T_{N-1}(B, zeta))/(w - zeta)^N|^2 over the circle.

    Periodic trapezoid rule on a midpoint-offset grid, doubled until two
    successive values agree to `rel`. Next to zeta the integrand is summed
    from its Taylor remainder series.

    Raises:
        NonConvergenceError: the grid cap was reached first
    """
    zeta = as_circle_point(zeta)
    grid = GRIDS.quadrature_start if grid is None else grid
    cap = GRIDS.quadrature_cap if cap is None else cap
    rel = TOL.quadrature_rel if rel is None else rel
    if N < 1:
        raise PreconditionError(f"N must be >= 1, got {N}")
    acs = ahern_clark_sum(B.zeros, zeta, 2 * N)
    logger.debug(f"Ahern-Clark sum of order {2 * N} at {zeta}: {acs:.6g}")

    jet = blaschke_jet(B, zeta, N + _LOCAL_ORDER, guard=TOL.boundary_pole_guard)
    head, local = jet[:N], jet[N:]
    radius = min(0.05, 0.25 * _pole_distance(B, zeta))

    def integrand(theta: np.ndarray) -> np.ndarray:
        w = np.exp(1j * theta)
        dw = w - zeta
        near = np.abs(dw) < radius
        values = np.empty_like(w)
        values[near] = P.polyval(dw[near], local)
        far = ~near
        values[far] = (blaschke_eval(B, w[far]) - P.polyval(dw[far], head)) / dw[far] ** N
        return np.abs(values) ** 2

    n = grid
    previous = None
    while n <= cap:
        theta = 2 * np.pi * (np.arange(n) + 0.5) / n
        value = float(np.mean(integrand(theta)))
        if previous is not None and abs(value - previous) <= rel * abs(value):
            logger.debug(f"Quadrature converged on {n} points: {value:.12g}")
            return value
        previous = value
        n *= 2
    raise NonConvergenceError(
        f"Quadrature did not converge up to {cap} points", last_values=[previous]
    )


def dirichlet_product_identity(
    f: AnalyticSeries, lam: Any, zeta: Any, N: int
) -> Tuple[float, float]:
    """
    Both sides of

        D^N(phi_lam f) = (1 - |lam|^2)/|zeta - lam|^(2N)
                         * |sum_j f_j (1 - conj(l))^j conj(l)^(N-1-j)|^2 + D^N(f)

    where l = lam conj(zeta) and f_j = zeta^j f^(j)(zeta)/j!.
    """
    lam = as_disk_point(lam, "lambda")
    zeta = as_circle_point(zeta)
    lhs = local_dirichlet_norm(f.times_factor(lam), zeta, N)

    rotated = lam * zeta.conjugate()
    jets = f.jet_at(zeta, N - 1) * zeta ** np.arange(N)
    j = np.arange(N)
    total = np.sum(jets * (1.0 - rotated.conjugate()) ** j * rotated.conjugate() ** (N - 1 - j))
    head = (1.0 - abs(lam) ** 2) / abs(zeta - lam) ** (2 * N)
    rhs = head * abs(total) ** 2 + local_dirichlet_norm(f, zeta, N)
    return lhs, float(rhs)


def dirichlet_partial_products(seq: DiskSequence, zeta: Any, N: int) -> PartialProductBound:
    """
    D_zeta^N(B_n) along the partial products, accumulated through the exact
    product identity with the boundary jets of B_{n-1}.
    """
    zeta = as_circle_point(zeta)
    energies = np.empty(len(seq))
    current = 0.0
    factors: List[complex] = []
    for n, lam in enumerate(seq.points):
        jets = (
            blaschke_jet(BlaschkeProduct.from_points(factors), zeta, N - 1, guard=TOL.boundary_pole_guard)
            if factors
            else np.eye(1, N, dtype=np.complex128)[0]
        )
        rotated = lam * zeta.conjugate()
        jets = jets * zeta ** np.arange(N)
        j = np.arange(N)
        total = np.sum(jets * (1.0 - np.conj(rotated)) ** j * np.conj(rotated) ** (N - 1 - j))
        current += (1.0 - abs(lam) ** 2) / abs(zeta - lam) ** (2 * N) * abs(total) ** 2
        energies[n] = current
        factors.append(complex(lam))

    terms = (1.0 - np.abs(seq.points) ** 2) / np.abs(zeta - seq.points) ** (2 * N)
    sums = np.cumsum(terms)
    return PartialProductBound(energies=energies, sums=sums, ratios=energies / sums)


def gram(pair: RationalPair, seq: DiskSequence, cap: Optional[int] = None) -> GramReport:
    """
    G_ij = k_j(l_i) / (||k_i|| ||k_j||) and its extreme eigenvalues.

    Raises:
        PreconditionError: the sequence is empty or larger than the cap
    """
    cap = GRIDS.gram_cap if cap is None else cap
    lam = seq.points
    n = len(lam)
    if n < 1:
        raise PreconditionError("Gram matrix needs at least one point")
    if n > cap:
        raise PreconditionError(f"Gram matrix of size {n} exceeds the cap {cap}")

    bv = np.asarray(pair.b(lam), dtype=np.complex128)
    K = (1.0 - bv[:, None] * np.conj(bv)[None, :]) / (1.0 - lam[:, None] * np.conj(lam)[None, :])
    norms = np.sqrt(np.real(np.diag(K)))
    G = K / np.outer(norms, norms)
    G = 0.5 * (G + G.conj().T)
    np.fill_diagonal(G, 1.0)

    eig = eigvalsh(G)
    if eig[0] < -1e-10:
        logger.warning(f"Gram matrix has a negative eigenvalue {eig[0]:.3e}")
    return GramReport(matrix=G, min_eig=float(eig[0]), max_eig=float(eig[-1]), diag_norms=norms)


def kernel_norm_sums(pair: RationalPair, seq: DiskSequence) -> np.ndarray:
    """Partial sums of 1/||k_l||^2 = (1 - |l|^2)/(1 - |b(l)|^2)."""
    lam = seq.points
    bv = np.asarray(pair.b(lam), dtype=np.complex128)
    return np.cumsum((1.0 - np.abs(lam) ** 2) / (1.0 - np.abs(bv) ** 2))


def toeplitz_apply(a: ComplexPoly, g: AnalyticSeries) -> AnalyticSeries:
    """T_conj(a) g: coefficient k is sum_j conj(a_j) g_{k+j}."""
    coeffs = np.asarray(g.coeffs, dtype=np.complex128)
    symbol = np.conj(a.coeffs)
    out = np.zeros(len(coeffs), dtype=np.complex128)
    for j, c in enumerate(symbol):
        if j < len(coeffs):
            out[: len(coeffs) - j] += c * coeffs[j:]
    return AnalyticSeries.from_coefficients(out, g.tail_bound * float(np.sum(np.abs(symbol))))


def toeplitz_matrix(a: ComplexPoly, rows: int) -> np.ndarray:
    """Rows 0..rows-1 of T_conj(a) acting on coefficients 0..rows-1+deg a."""
    d = max(a.degree, 0)
    A = np.zeros((rows, rows + d), dtype=np.complex128)
    for j, c in enumerate(np.conj(a.coeffs)):
        A[np.arange(rows), np.arange(rows) + j] = c
    return A


def range_membership_residual(
    a: ComplexPoly,
    f: AnalyticSeries,
    truncation: int,
    budget: Optional[float] = None,
) -> MembershipResidual:
    """
    min ||T_conj(a) g - f|| over g with ||g|| <= budget, on the coefficients
    0..truncation of f.

    The finite section alone is always solvable; the norm budget (default
    10 max(1, ||f||)) is what separates functions in the range from
    functions outside it. Solved with an SVD and a secular equation for the
    Lagrange multiplier.
    """
    if truncation < max(a.degree, 0) + 1:
        raise PreconditionError(f"truncation must be >= deg a + 1 = {a.degree + 1}")
    rows = truncation + 1
    rhs = np.zeros(rows, dtype=np.complex128)
    k = min(rows, f.n_terms)
    rhs[:k] = f.coeffs[:k]
    if budget is None:
        budget = 10.0 * max(1.0, f.norm_h2())

    A = toeplitz_matrix(a, rows)
    U, s, Vh = svd(A, full_matrices=False)
    rank_deficient = bool(s[-1] < 1e-12 * s[0])
    if rank_deficient:
        logger.warning(f"Toeplitz section is rank deficient (s_min/s_max = {s[-1] / s[0]:.2e})")
    beta = U.conj().T @ rhs

    def solution(mu: float) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            w = np.where(s > 0, s / (s**2 + mu), 0.0)
        return Vh.conj().T @ (w * beta)

    g = solution(0.0)
    if np.linalg.norm(g) > budget:
        hi = s[0] * np.linalg.norm(rhs) / budget + 1.0
        mu = brentq(lambda m: np.linalg.norm(solution(m)) - budget, 0.0, hi, xtol=1e-14, rtol=1e-12)
        g = solution(mu)
    residual = float(np.linalg.norm(A @ g - rhs))
    return MembershipResidual(
        truncation=truncation,
        residual=residual,
        preimage_norm=float(np.linalg.norm(g)),
        budget=budget,
        rank_deficient=rank_deficient,
    )


def range_membership_curve(
    a: ComplexPoly,
    f: AnalyticSeries,
    start: int = 16,
    doublings: int = 4,
    budget: Optional[float] = None,
) -> MembershipCurve:
    """Residuals at truncations start, 2 start, ..., with the last value as floor."""
    truncations = [start * 2**i for i in range(doublings + 1)]
    points = [range_membership_residual(a, f, t, budget) for t in truncations]
    return MembershipCurve(
        truncations=truncations,
        residuals=[p.residual for p in points],
        preimage_norms=[p.preimage_norm for p in points],
        budget=points[0].budget,
        floor=points[-1].residual,
    )


def corona_type_delta(
    symbols: Sequence[ComplexPoly],
    radial: Optional[int] = None,
    angular: Optional[int] = None,
) -> float:
    """min over pairs i < j and a disk grid of |a_i| + |a_j|."""
    radial = GRIDS.corona_radial if radial is None else radial
    angular = GRIDS.corona_angular if angular is None else angular
    if len(symbols) < 2:
        raise PreconditionError("corona_type_delta needs at least two symbols")
    radii = np.linspace(0.0, 1.0, radial)
    theta = 2 * np.pi * np.arange(angular) / angular
    z = radii[:, None] * np.exp(1j * theta)[None, :]
    moduli = [np.abs(a(z)) for a in symbols]
    delta = float("inf")
    for i in range(len(moduli)):
        for j in range(i + 1, len(moduli)):
            delta = min(delta, float(np.min(moduli[i] + moduli[j])))
    return delta


def hb_norm_of(f: AnalyticSeries, pair: Union[RationalPair, BoundaryZeroSet]) -> NormEstimate:
    return hb_norm(decompose(f, pair))


def is_multiplier_candidate(f: AnalyticSeries, pair: RationalPair, grid_size: Optional[int] = None) -> bool:
    """Finite sup on the circle and a successful decomposition."""
    grid_size = GRIDS.boundary if grid_size is None else grid_size
    z = np.exp(2j * np.pi * np.arange(grid_size) / grid_size)
    try:
        sup = float(np.max(np.abs(f(z))))
        norm = hb_norm(decompose(f, pair)).value
    except (SingularityError, DivisionResidualError):
        return False
    return math.isfinite(sup) and math.isfinite(norm)
