"""
Pydantic report models for hbinterp.

Every subcommand produces an ExperimentReport subclass. All fields are JSON
native (complex values as [re, im], polynomials as ascending lists of
pairs) so that an emitted report re-validates with model_validate.
series() returns the plot-ready columns written by the CSV generator.
"""

from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from hbinterp.numerics.families import SeriesClass
from hbinterp.numerics.hb_space import MembershipCurve
from hbinterp.numerics.interpolation import Verdict
from hbinterp.numerics.pair import PairVerification
from hbinterp.numerics.random_seq import (
    DyadicReport,
    ExceedanceCheck,
    ThreeSeriesReport,
    ZeroOneReport,
)


JsonComplex = Tuple[Optional[float], Optional[float]]
Series = Dict[str, List[Any]]


class RationalDocument(BaseModel):
    """num/den as ascending coefficient lists."""

    model_config = ConfigDict(extra="forbid")

    num: List[JsonComplex] = Field(description="Numerator coefficients")
    den: List[JsonComplex] = Field(default_factory=lambda: [(1.0, 0.0)], description="Denominator coefficients")


class ZeroDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    zeta: JsonComplex
    multiplicity: int = Field(ge=1)


class PairDocument(BaseModel):
    """A rational pair (a, b) with the boundary zeros of a."""

    model_config = ConfigDict(extra="forbid")

    b: RationalDocument
    a: RationalDocument
    zeros: List[ZeroDocument]


class ExperimentReport(BaseModel):
    """Base of all reports: the subcommand and the parameters it ran with."""

    model_config = ConfigDict(extra="forbid")

    kind: str = Field(description="Subcommand that produced the report")
    version: str = Field(description="hbinterp version")
    parameters: Dict[str, Any] = Field(default_factory=dict, description="Effective parameters")

    def scalars(self) -> Dict[str, Any]:
        """Top-level fields that are plain numbers, strings or booleans."""
        data = self.model_dump(mode="json", exclude={"kind", "version", "parameters"})
        return {k: v for k, v in data.items() if isinstance(v, (int, float, str, bool)) or v is None}

    def series(self) -> Series:
        """Plot-ready columns; scalar reports become a single row."""
        return {k: [v] for k, v in self.scalars().items()}


def _verification_series(v: PairVerification) -> Series:
    return {
        "max_residual": [v.max_residual],
        "min_interior_root_modulus": [v.min_interior_root_modulus],
        "a0": [v.a0_value],
        "mate_sup_norm": [v.mate_sup_norm],
        "passed": [v.passed],
    }


class PairReport(ExperimentReport):
    pair: PairDocument
    verification: PairVerification

    def series(self) -> Series:
        return _verification_series(self.verification)


class VerificationReport(ExperimentReport):
    verification: PairVerification
    passed: bool

    def series(self) -> Series:
        return _verification_series(self.verification)


class CoronaReport(ExperimentReport):
    delta: float
    radial: int
    angular: int


class ZeroSumDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    zeta: JsonComplex
    multiplicity: int
    truncations: List[int]
    partial_sums: List[float]
    classification: SeriesClass


class CarlesonDocument(ExperimentReport):
    delta: float
    separation: float
    argmin_index: int
    truncations: List[int]
    deltas: List[float]

    def series(self) -> Series:
        return {"truncation": list(self.truncations), "delta": list(self.deltas)}


class DecideReport(ExperimentReport):
    verdict: Verdict
    reason: str
    carleson_delta: float
    carleson_class: SeriesClass
    carleson_truncations: List[int]
    carleson_deltas: List[float]
    sums: List[ZeroSumDocument]
    kernel_norm_sums: List[Optional[float]] = Field(default_factory=list)

    def series(self) -> Series:
        columns: Series = {
            "truncation": list(self.carleson_truncations),
            "carleson_delta": list(self.carleson_deltas),
        }
        for i, s in enumerate(self.sums):
            columns[f"sum_zero_{i}"] = list(s.partial_sums)
        if self.kernel_norm_sums:
            columns["kernel_norm_sum"] = list(self.kernel_norm_sums)
        return columns


class DirichletReport(ExperimentReport):
    zeta: JsonComplex
    order: int
    value: Optional[float]
    error: Optional[float]
    method: str
    closed_form: Optional[float] = None


class BlaschkeReport(ExperimentReport):
    zeta: JsonComplex
    degree: int
    derivatives: List[JsonComplex] = Field(description="B^(j)(zeta), j = 0..derivs")
    taylor: List[JsonComplex] = Field(description="Boundary Taylor coefficients")
    ahern_clark: List[Optional[float]] = Field(description="Ahern-Clark sums of order 0..derivs")
    radial_grid: List[float]
    radial_max: List[Optional[float]] = Field(description="max_r |B^(j)(r zeta)|")
    taylor_changes: List[float] = Field(default_factory=list)
    partial_energies: List[Optional[float]] = Field(default_factory=list)
    partial_sums: List[Optional[float]] = Field(default_factory=list)

    def series(self) -> Series:
        columns: Series = {
            "j": list(range(len(self.derivatives))),
            "abs_derivative": [
                None if re is None or im is None else abs(complex(re, im)) for re, im in self.derivatives
            ],
            "ahern_clark": list(self.ahern_clark),
            "radial_max": list(self.radial_max),
        }
        if self.partial_energies:
            columns["partial_energy"] = list(self.partial_energies)
            columns["partial_sum"] = list(self.partial_sums)
        if self.taylor_changes:
            columns["taylor_change"] = list(self.taylor_changes)
        return columns


class GramDocument(ExperimentReport):
    truncations: List[int]
    min_eigs: List[float]
    max_eigs: List[float]
    kernel_norm_sums: List[Optional[float]]

    def series(self) -> Series:
        return {
            "truncation": list(self.truncations),
            "min_eig": list(self.min_eigs),
            "max_eig": list(self.max_eigs),
            "kernel_norm_sum": list(self.kernel_norm_sums),
        }


class MembershipReport(ExperimentReport):
    symbol: List[JsonComplex]
    curve: MembershipCurve

    def series(self) -> Series:
        return {
            "truncation": list(self.curve.truncations),
            "residual": list(self.curve.residuals),
            "preimage_norm": list(self.curve.preimage_norms),
        }


class NpSolveReport(ExperimentReport):
    t_star: float
    solution: RationalDocument
    residuals: List[float]
    boundary_sup: float

    def series(self) -> Series:
        return {"node": list(range(len(self.residuals))), "residual": list(self.residuals)}


class ConstructReport(ExperimentReport):
    F: RationalDocument
    value_residuals: List[float]
    boundary_sup: float
    rational_consistency: float
    p: List[JsonComplex] = Field(description="Polynomial part of the decomposition of F")
    hb_norm: Optional[float]
    split: Tuple[int, int, int]
    eta: List[JsonComplex]
    passed: bool
    failures: List[str] = Field(default_factory=list, description="Failed multiplier checks")

    def series(self) -> Series:
        return {"point": list(range(len(self.value_residuals))), "residual": list(self.value_residuals)}


class AddPointReport(ExperimentReport):
    F: RationalDocument
    point: JsonComplex
    value: JsonComplex
    residual: float
    max_change_on_zeros: float


class SimulationReport(ExperimentReport):
    result: ZeroOneReport

    def series(self) -> Series:
        r = self.result
        return {
            "truncation": list(r.truncations),
            "exceedance_fraction": list(r.exceedance_fractions),
            "median": list(r.medians),
        }


class ThreeSeriesDocument(ExperimentReport):
    result: ThreeSeriesReport

    def series(self) -> Series:
        r = self.result
        return {
            "n": list(range(1, r.count + 1)),
            "exceedance_sum": list(r.exceedance.partial_sums),
            "mean_sum": list(r.mean.partial_sums),
            "variance_sum": list(r.variance.partial_sums),
        }


class DyadicDocument(ExperimentReport):
    result: DyadicReport

    def series(self) -> Series:
        return {"k": list(self.result.ks), "count": list(self.result.counts)}


class ExceedanceReport(ExperimentReport):
    result: ExceedanceCheck
    z_score: float
