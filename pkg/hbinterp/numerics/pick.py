"""
Finite Nevanlinna-Pick problems in H^infinity.

pick_feasible tests positivity of the Pick matrix with a pivoted Cholesky
factorization, np_solve finds the minimal norm t_star (generalized
eigenvalue estimate refined by bisection) and builds a rational solution of
norm t_star (1 + 1e-6) through the Schur-Nevanlinna recursion.
"""

import logging
from typing import Any, Iterable, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.linalg import LinAlgError, eigh
from scipy.linalg.lapack import zpstrf

from hbinterp.core.config import GRIDS, TOL
from hbinterp.core.errors import DomainError, NonConvergenceError
from hbinterp.numerics.disk import DiskSequence
from hbinterp.numerics.polynomials import ComplexPoly
from hbinterp.numerics.rational import RationalFn


logger = logging.getLogger(__name__)

# Solutions are built slightly above t_star, where the Pick matrix is definite.
SOLVE_MARGIN = 1e-6
_MAX_DOUBLINGS = 200


def _pseudo_distances(points: np.ndarray) -> np.ndarray:
    num = np.abs(points[:, None] - points[None, :])
    den = np.abs(1.0 - points[:, None] * np.conj(points)[None, :])
    return num / den


class PickProblem(BaseModel):
    """Nodes, targets and the norm bound t of a Pick problem."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    nodes: DiskSequence
    targets: np.ndarray
    scale: float = Field(default=1.0, gt=0)

    @field_validator("nodes", mode="before")
    @classmethod
    def _as_sequence(cls, v: Any) -> DiskSequence:
        return v if isinstance(v, DiskSequence) else DiskSequence.explicit(v)

    @field_validator("targets", mode="before")
    @classmethod
    def _as_targets(cls, v: Any) -> np.ndarray:
        arr = np.atleast_1d(np.asarray(v, dtype=np.complex128)).copy()
        if not np.all(np.isfinite(arr)):
            raise DomainError("Targets must be finite")
        arr.setflags(write=False)
        return arr

    @model_validator(mode="after")
    def _check(self) -> "PickProblem":
        if len(self.targets) != len(self.nodes):
            raise DomainError(
                f"{len(self.targets)} targets for {len(self.nodes)} nodes"
            )
        pts = self.nodes.points
        if len(pts) > 1:
            d = _pseudo_distances(pts)
            np.fill_diagonal(d, np.inf)
            if d.min() <= 1e-10:
                raise DomainError("Pick nodes must be distinct")
        return self

    def with_scale(self, t: float) -> "PickProblem":
        return self.model_copy(update={"scale": t})


def szego_gram(points: np.ndarray) -> np.ndarray:
    """K_ij = 1/(1 - l_i conj(l_j))."""
    return 1.0 / (1.0 - points[:, None] * np.conj(points)[None, :])


def pick_matrix(problem: PickProblem) -> np.ndarray:
    """(t^2 - w_i conj(w_j)) / (1 - l_i conj(l_j))."""
    w = problem.targets
    t = problem.scale
    return (t**2 - w[:, None] * np.conj(w)[None, :]) * szego_gram(problem.nodes.points)


def pick_feasible(problem: PickProblem, pivot_tol: Optional[float] = None) -> bool:
    """
    True iff the Pick matrix is positive semidefinite.

    Pivoted Cholesky stops at pivots below pivot_tol (relative); the matrix
    is accepted when the factor reproduces it to that tolerance.
    """
    pivot_tol = TOL.pick_pivot if pivot_tol is None else pivot_tol
    A = pick_matrix(problem)
    n = A.shape[0]
    scale = max(float(np.max(np.abs(np.diag(A)))), np.finfo(float).tiny)
    if np.min(np.real(np.diag(A))) < -pivot_tol * scale:
        return False
    tol = pivot_tol * scale
    c, piv, rank, info = zpstrf(np.asfortranarray(A), lower=0, tol=tol)
    if info < 0:
        raise DomainError(f"zpstrf rejected argument {-info}")
    U = np.triu(c)[:rank, :]
    perm = piv - 1
    residual = A[np.ix_(perm, perm)] - U.conj().T @ U
    return bool(np.max(np.abs(residual)) <= 10 * n * tol)


def _eigen_estimate(problem: PickProblem) -> Optional[float]:
    """sqrt of the largest eigenvalue of (D K D*, K)."""
    K = szego_gram(problem.nodes.points)
    w = problem.targets
    DKD = w[:, None] * K * np.conj(w)[None, :]
    try:
        values = eigh(DKD, K, eigvals_only=True)
    except LinAlgError:
        logger.debug("Generalized eigenproblem failed, falling back to bisection")
        return None
    return float(np.sqrt(max(values[-1], 0.0)))


def pick_t_star(problem: PickProblem, rel: Optional[float] = None) -> float:
    """
    Smallest t with a positive semidefinite Pick matrix.

    Raises:
        NonConvergenceError: no feasible t was bracketed
    """
    rel = TOL.bisection_rel if rel is None else rel
    w = problem.targets
    if not np.any(w):
        return 0.0

    def feasible(t: float) -> bool:
        return pick_feasible(problem.with_scale(t))

    estimate = _eigen_estimate(problem)
    lo, hi = 0.0, float(np.max(np.abs(w)))
    if estimate is not None and estimate > 0:
        lo_try, hi_try = estimate * (1 - 1e-7), estimate * (1 + 1e-7)
        if feasible(hi_try) and not feasible(lo_try):
            lo, hi = lo_try, hi_try
    for _ in range(_MAX_DOUBLINGS):
        if feasible(hi):
            break
        lo, hi = hi, 2 * hi
    else:
        raise NonConvergenceError("Pick bisection could not bracket t_star", last_values=[lo, hi])

    while hi - lo > rel * hi:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    logger.debug(f"t_star = {hi:.12g} (eigen estimate {estimate})")
    return hi


class SchurInterpolant(BaseModel):
    """
    t f_1 where f_k = (s_k + phi_k f_{k+1}) / (1 + conj(s_k) phi_k f_{k+1}),
    phi_k the Blaschke factor at node k and f_n = s_n.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    nodes: np.ndarray
    parameters: np.ndarray
    scale: float

    @classmethod
    def from_problem(cls, problem: PickProblem) -> "SchurInterpolant":
        nodes = problem.nodes.points
        values = problem.targets / problem.scale
        params: List[complex] = []
        for k in range(len(nodes)):
            s = values[k]
            if abs(s) >= 1.0:
                raise NonConvergenceError(
                    f"Schur parameter {k} has modulus {abs(s):.12g} >= 1", last_values=[s]
                )
            params.append(complex(s))
            rest = nodes[k + 1 :]
            phi = (rest - nodes[k]) / (1.0 - np.conj(nodes[k]) * rest)
            values = np.concatenate(
                [values[: k + 1], (values[k + 1 :] - s) / (1.0 - np.conj(s) * values[k + 1 :]) / phi]
            )
        return cls(nodes=np.array(nodes), parameters=np.array(params), scale=problem.scale)

    def __call__(self, z: Any) -> Any:
        z = np.asarray(z, dtype=np.complex128)
        if len(self.parameters) == 0:
            return np.zeros_like(z)[()]
        f = np.full_like(z, self.parameters[-1])
        for node, s in zip(self.nodes[-2::-1], self.parameters[-2::-1]):
            pf = (z - node) / (1.0 - np.conj(node) * z) * f
            f = (s + pf) / (1.0 + np.conj(s) * pf)
        return (self.scale * f)[()]

    def to_rational(self) -> RationalFn:
        if len(self.parameters) == 0:
            return RationalFn(num=ComplexPoly.zero())
        num = ComplexPoly.constant(self.parameters[-1])
        den = ComplexPoly.constant(1.0)
        for node, s in zip(self.nodes[-2::-1], self.parameters[-2::-1]):
            outer = ComplexPoly([1.0, -np.conj(node)])
            inner = ComplexPoly([-node, 1.0])
            num, den = s * outer * den + inner * num, outer * den + np.conj(s) * inner * num
        return RationalFn(num=num * self.scale, den=den)


class NpSolution(BaseModel):
    """Minimal norm and a rational solution of a Pick problem."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    t_star: float
    f: RationalFn
    interpolant: Optional[SchurInterpolant] = None
    residuals: List[float]
    boundary_sup: float

    def __call__(self, z: Any) -> Any:
        return self.interpolant(z) if self.interpolant is not None else self.f(z)


def np_solve(
    nodes: Any,
    targets: Iterable[complex],
    grid_size: Optional[int] = None,
    rel: Optional[float] = None,
) -> NpSolution:
    """
    Minimal-norm H^infinity interpolation f(l_i) = w_i.

    Raises:
        DomainError: nodes not distinct or sizes differ
        NonConvergenceError: bisection or Schur recursion failed
    """
    grid_size = GRIDS.boundary if grid_size is None else grid_size
    problem = PickProblem(nodes=nodes, targets=list(targets))
    pts = problem.nodes.points
    if not np.any(problem.targets):
        return NpSolution(
            t_star=0.0,
            f=RationalFn(num=ComplexPoly.zero()),
            residuals=[0.0] * len(pts),
            boundary_sup=0.0,
        )

    t_star = pick_t_star(problem, rel)
    interpolant = SchurInterpolant.from_problem(problem.with_scale(t_star * (1 + SOLVE_MARGIN)))
    residuals = np.abs(interpolant(pts) - problem.targets)
    circle = np.exp(2j * np.pi * np.arange(grid_size) / grid_size)
    sup = float(np.max(np.abs(interpolant(circle))))
    logger.info(f"Pick problem of size {len(pts)}: t_star = {t_star:.10g}, max residual {residuals.max():.2e}")
    return NpSolution(
        t_star=t_star,
        f=interpolant.to_rational(),
        interpolant=interpolant,
        residuals=residuals.tolist(),
        boundary_sup=sup,
    )
