"""
Steinhaus random sequences.

Sampling with counter-based angles, the exact law of the variables
X_n = (1 - |l_n|^2)/|zeta - l_n|^(2M) (exceedance probability and
truncated moments), the Kolmogorov three-series diagnostics, dyadic
counting and the 0-1 law experiment.

Only the radii enter the conditions; 1 - r_n is taken from the family law
directly so that radii closer to 1 than double precision resolves still
give exact weights.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.integrate import quad

from hbinterp.core.config import SIMULATION
from hbinterp.core.errors import DomainError, NonConvergenceError, PreconditionError
from hbinterp.numerics.disk import DiskSequence
from hbinterp.numerics.families import (
    AngleLaw,
    AngleMode,
    RadiiFamily,
    RadiiKind,
    SequenceFamily,
    SeriesClass,
    classify_radii,
    steinhaus_angles,
)


logger = logging.getLogger(__name__)

_QUAD_LIMIT = 2**10


class SteinhausSample(BaseModel):
    """Points r_n e^{i theta_n} drawn for a seed."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    family: RadiiFamily
    seed: int
    points: DiskSequence


def steinhaus_family(family: RadiiFamily, seed: int) -> SequenceFamily:
    data = family.model_dump(exclude={"angles"})
    return SequenceFamily(**data, angles=AngleLaw(mode=AngleMode.STEINHAUS, seed=seed))


def sample_steinhaus(family: RadiiFamily, seed: int, count: Optional[int] = None) -> SteinhausSample:
    """Deterministic sample: the n-th angle depends on (seed, n) only."""
    seq_family = steinhaus_family(family, seed)
    points = DiskSequence.from_family(seq_family, count)
    return SteinhausSample(family=family, seed=seed, points=points)


def _check_radius(r: float, M: int) -> None:
    if not (0.0 <= r < 1.0):
        raise DomainError(f"r must lie in [0, 1), got {r}")
    if M < 1:
        raise DomainError(f"M must be >= 1, got {M}")


def exceedance_prob(r: float, M: int, one_minus_r: Optional[float] = None) -> float:
    """
    P(X > 1) = arccos(u)/pi with u = (1 + r^2 - (1 - r^2)^(1/M))/(2r).

    Evaluated as 2 arcsin(sqrt((1 - u)/2))/pi with
    1 - u = ((1 - r^2)^(1/M) - (1 - r)^2)/(2r), free of cancellation near r = 1.
    """
    _check_radius(r, M)
    if r == 0.0:
        return 0.0
    eps = (1.0 - r) if one_minus_r is None else one_minus_r
    s = (eps * (2.0 - eps)) ** (1.0 / M)
    one_minus_u = min(max((s - eps**2) / (2.0 * r), 0.0), 2.0)
    return 2.0 * math.asin(math.sqrt(one_minus_u / 2.0)) / math.pi


def _x_of_theta(theta: float, r: float, eps: float, M: int) -> float:
    # |1 - r e^{i theta}|^2 = (1 - r)^2 + 4 r sin^2(theta/2)
    dist2 = eps**2 + 4.0 * r * math.sin(theta / 2.0) ** 2
    return eps * (2.0 - eps) / dist2**M


def _integrate(fn, lo: float, hi: float, breakpoints: Sequence[float]) -> float:
    inner = [p for p in breakpoints if lo < p < hi]
    result = quad(fn, lo, hi, points=inner or None, limit=_QUAD_LIMIT, epsabs=0.0, epsrel=1e-10, full_output=1)
    value, error = result[0], result[1]
    if len(result) > 3 and error > 1e-8 * max(abs(value), 1e-300):
        raise NonConvergenceError(f"Quadrature failed: {result[3]}", last_values=[value, error])
    return float(value)


def truncated_moments(r: float, M: int, one_minus_r: Optional[float] = None) -> Tuple[float, float]:
    """
    E[Y] and V[Y] for Y = X 1{X <= 1}.

    Both integrands are even in theta and bounded by 1 on [arccos(u), pi].
    """
    _check_radius(r, M)
    if r == 0.0:
        return 1.0, 0.0
    eps = (1.0 - r) if one_minus_r is None else one_minus_r
    alpha = math.pi * exceedance_prob(r, M, eps)
    scale = max(eps, 1e-300)
    breakpoints = [alpha + k * scale for k in (1.0, 10.0, 1e2, 1e3, 1e4)]

    mean = _integrate(lambda t: _x_of_theta(t, r, eps, M), alpha, math.pi, breakpoints) / math.pi
    second = _integrate(lambda t: _x_of_theta(t, r, eps, M) ** 2, alpha, math.pi, breakpoints) / math.pi
    return mean, max(second - mean**2, 0.0)


class SeriesDiagnostics(BaseModel):
    """One of the three series."""

    model_config = ConfigDict(frozen=True)

    terms: List[float]
    partial_sums: List[float]
    classification: SeriesClass
    last_doubling_change: float


class ThreeSeriesReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    M: int
    count: int
    exceedance: SeriesDiagnostics
    mean: SeriesDiagnostics
    variance: SeriesDiagnostics


def _diagnostics(terms: np.ndarray, classification: SeriesClass) -> SeriesDiagnostics:
    sums = np.cumsum(terms)
    n = len(terms)
    if n >= 2:
        half = float(sums[n // 2 - 1])
        change = abs(float(sums[-1]) - half) / max(abs(float(sums[-1])), 1e-300)
    else:
        change = 0.0
    return SeriesDiagnostics(
        terms=terms.tolist(),
        partial_sums=sums.tolist(),
        classification=classification,
        last_doubling_change=change,
    )


def three_series(family: RadiiFamily, M: int) -> ThreeSeriesReport:
    """Terms and partial sums of sum P(X_n > 1), sum E[Y_n], sum V[Y_n]."""
    if M < 1:
        raise DomainError(f"M must be >= 1, got {M}")
    eps = family.one_minus_radii()
    r = 1.0 - eps
    probs = np.array([exceedance_prob(ri, M, ei) for ri, ei in zip(r, eps)])
    moments = np.array([truncated_moments(ri, M, ei) for ri, ei in zip(r, eps)]).reshape(-1, 2)
    classification = classify_radii(family, 1.0 / (2 * M))
    logger.info(f"Three series for {family.kind.value} family, M={M}: {classification.value}")
    return ThreeSeriesReport(
        M=M,
        count=len(eps),
        exceedance=_diagnostics(probs, classification),
        mean=_diagnostics(moments[:, 0], classification),
        variance=_diagnostics(moments[:, 1], classification),
    )


class DyadicReport(BaseModel):
    """N_k = #{n : 1 - 2^-k <= r_n < 1 - 2^-(k+1)} with the two dyadic sums."""

    model_config = ConfigDict(frozen=True)

    M: int
    ks: List[int]
    counts: List[int]
    carleson_sum: float
    exponent_sum: float
    carleson_class: SeriesClass
    exponent_class: SeriesClass


def carleson_almost_surely(family: RadiiFamily) -> SeriesClass:
    """Closed-form class of sum_k N_k^2 2^-k (a.s. Carleson test)."""
    if family.kind == RadiiKind.POWER:
        return classify_radii(family, 0.5)
    return classify_radii(family, 1.0)


def dyadic_counts(family: RadiiFamily, M: int = 1) -> DyadicReport:
    eps = family.one_minus_radii()
    k = np.floor(-np.log2(eps)).astype(int)
    k = np.maximum(k, 0)
    counts = np.bincount(k) if len(k) else np.zeros(0, dtype=int)
    ks = np.arange(len(counts))
    return DyadicReport(
        M=M,
        ks=ks.tolist(),
        counts=counts.tolist(),
        carleson_sum=float(np.sum(counts.astype(float) ** 2 * 2.0 ** (-ks))),
        exponent_sum=float(np.sum(counts * 2.0 ** (-ks / (2 * M)))),
        carleson_class=carleson_almost_surely(family),
        exponent_class=classify_radii(family, 1.0 / (2 * M)),
    )


def trial_sums(
    family: RadiiFamily,
    M: int,
    seed: int,
    truncations: Sequence[int],
    zeta_angle: float = 0.0,
    rotation: float = 0.0,
) -> np.ndarray:
    """
    sum_{n <= T} X_n at zeta = e^{i zeta_angle} for each truncation T, with
    the sample rotated by e^{i rotation}.
    """
    T = max(truncations)
    eps = family.one_minus_radii(T)
    theta = steinhaus_angles(seed, T) + rotation
    dist2 = eps**2 + 4.0 * (1.0 - eps) * np.sin((theta - zeta_angle) / 2.0) ** 2
    x = eps * (2.0 - eps) / dist2**M
    return np.array([np.sum(x[:t]) for t in truncations])


class ZeroOneReport(BaseModel):
    """Trial sums of the 0-1 law experiment."""

    model_config = ConfigDict(frozen=True)

    M: int
    trials: int
    threshold: float
    master_seed: int
    truncations: List[int]
    exceedance_fractions: List[float]
    medians: List[float]
    median_change: float
    regime: SeriesClass
    sums: List[List[float]] = Field(default_factory=list)

    @property
    def nondecreasing(self) -> bool:
        return all(b >= a for a, b in zip(self.exceedance_fractions, self.exceedance_fractions[1:]))


def experiment_truncations(truncation: int) -> List[int]:
    return sorted({max(truncation // 4, 1), max(truncation // 2, 1), truncation})


def zero_one_experiment(
    family: RadiiFamily,
    M: int,
    trials: Optional[int] = None,
    truncation: Optional[int] = None,
    threshold: Optional[float] = None,
    master_seed: Optional[int] = None,
    threads: Optional[int] = None,
    keep_sums: bool = False,
) -> ZeroOneReport:
    """
    Trial t uses the seed master_seed + t; results are collected in trial
    order so the report does not depend on the worker count.
    """
    trials = SIMULATION.trials if trials is None else trials
    truncation = SIMULATION.truncation if truncation is None else truncation
    threshold = SIMULATION.threshold if threshold is None else threshold
    master_seed = SIMULATION.master_seed if master_seed is None else master_seed
    if trials < 1:
        raise PreconditionError(f"trials must be >= 1, got {trials}")
    if truncation < 1 or M < 1:
        raise PreconditionError("truncation and M must be >= 1")
    if family.kind == RadiiKind.EXPLICIT and truncation > len(family.values or []):
        raise PreconditionError(f"truncation {truncation} exceeds the explicit radii")

    truncations = experiment_truncations(truncation)
    workers = threads or SIMULATION.threads or 1
    logger.info(f"0-1 experiment: {trials} trials, T={truncation}, {workers} worker(s)")

    def run(t: int) -> np.ndarray:
        return trial_sums(family, M, master_seed + t, truncations)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, range(trials)))
    else:
        rows = [run(t) for t in range(trials)]
    sums = np.vstack(rows)

    fractions = [float(np.count_nonzero(sums[:, i] > threshold)) / trials for i in range(len(truncations))]
    medians = np.median(sums, axis=0)
    change = 0.0
    if len(medians) >= 2:
        change = float(abs(medians[-1] - medians[-2]) / max(abs(medians[-2]), 1e-300))

    return ZeroOneReport(
        M=M,
        trials=trials,
        threshold=threshold,
        master_seed=master_seed,
        truncations=truncations,
        exceedance_fractions=fractions,
        medians=medians.tolist(),
        median_change=change,
        regime=classify_radii(family, 1.0 / (2 * M)),
        sums=sums.tolist() if keep_sums else [],
    )


class ExceedanceCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    r: float
    M: int
    draws: int
    seed: int
    exact: float
    empirical: float
    sigma: float

    @property
    def z_score(self) -> float:
        return abs(self.empirical - self.exact) / self.sigma if self.sigma > 0 else 0.0


def monte_carlo_exceedance(r: float, M: int, draws: int = 100_000, seed: int = 0) -> ExceedanceCheck:
    """Empirical frequency of {X > 1} over Steinhaus draws against the exact value."""
    _check_radius(r, M)
    theta = steinhaus_angles(seed, draws)
    eps = 1.0 - r
    dist2 = eps**2 + 4.0 * r * np.sin(theta / 2.0) ** 2
    x = eps * (2.0 - eps) / dist2**M
    p = exceedance_prob(r, M)
    return ExceedanceCheck(
        r=r,
        M=M,
        draws=draws,
        seed=seed,
        exact=p,
        empirical=float(np.count_nonzero(x > 1.0)) / draws,
        sigma=math.sqrt(p * (1.0 - p) / draws),
    )
