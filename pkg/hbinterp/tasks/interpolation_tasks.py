"""
Interpolation tasks: decide, carleson, np-solve, construct, add-point.
"""

import logging
from typing import Any, Dict, List

import numpy as np

from hbinterp.core.config import HbConfig
from hbinterp.core.errors import DomainError
from hbinterp.core.models import (
    AddPointReport,
    CarlesonDocument,
    ConstructReport,
    DecideReport,
    NpSolveReport,
    RationalDocument,
    ZeroSumDocument,
)
from hbinterp.core.serialization import (
    decode_complex_list,
    decode_pair,
    decode_rational,
    decode_sequence,
    encode_complex,
    encode_complex_list,
    encode_float,
    encode_poly,
    encode_rational,
    parse_complex,
)
from hbinterp.core.task_base import TaskBase, TaskCategory
from hbinterp.numerics.disk import BlaschkeProduct
from hbinterp.numerics.hb_space import hb_norm, kernel_norm_sums
from hbinterp.numerics.interpolation import (
    add_point,
    carleson_delta,
    construct_multiplier,
    decide,
    doubling_truncations,
)
from hbinterp.numerics.pick import np_solve


logger = logging.getLogger(__name__)


class InterpolationTask(TaskBase):
    @property
    def category(self) -> TaskCategory:
        return TaskCategory.INTERPOLATION


def _values(data: Any, key: str = "values") -> List[complex]:
    if isinstance(data, dict):
        if key not in data:
            raise DomainError(f"Input has no '{key}' entry")
        data = data[key]
    return decode_complex_list(data)


class DecideTask(InterpolationTask):
    @property
    def name(self) -> str:
        return "decide"

    @property
    def description(self) -> str:
        return "Is the sequence interpolating for H(b)? (Carleson + boundary sums)"

    @property
    def required_params(self) -> List[str]:
        return ["pair", "seq"]

    @property
    def input_params(self) -> List[str]:
        return ["pair", "seq"]

    def run(self, params: Dict[str, Any], config: HbConfig) -> DecideReport:
        pair = decode_pair(self.load(params, "pair"))
        seq = decode_sequence(self.load(params, "seq"))
        decision = decide(pair, seq)
        sums = [
            ZeroSumDocument(
                zeta=encode_complex(z.zeta),
                multiplicity=z.m,
                truncations=z.truncations,
                partial_sums=z.partial_sums,
                classification=z.classification,
            )
            for z in decision.sums.per_zero
        ]
        kernel_sums = kernel_norm_sums(pair, seq) if len(seq) else np.zeros(0)
        return self.make_report(
            DecideReport,
            params,
            verdict=decision.verdict,
            reason=decision.reason,
            carleson_delta=decision.carleson.delta,
            carleson_class=decision.carleson_class,
            carleson_truncations=decision.carleson_truncations,
            carleson_deltas=decision.carleson_deltas,
            sums=sums,
            kernel_norm_sums=[encode_float(kernel_sums[t - 1]) for t in decision.carleson_truncations if t >= 1],
        )


class CarlesonTask(InterpolationTask):
    @property
    def name(self) -> str:
        return "carleson"

    @property
    def description(self) -> str:
        return "Finite Carleson constants along doubling truncations"

    @property
    def required_params(self) -> List[str]:
        return ["seq"]

    @property
    def input_params(self) -> List[str]:
        return ["seq"]

    def run(self, params: Dict[str, Any], config: HbConfig) -> CarlesonDocument:
        seq = decode_sequence(self.load(params, "seq"))
        if not len(seq):
            raise DomainError("The sequence is empty")
        truncations = doubling_truncations(len(seq))
        report = carleson_delta(seq)
        return self.make_report(
            CarlesonDocument,
            params,
            delta=report.delta,
            separation=report.separation,
            argmin_index=report.argmin_index,
            truncations=truncations,
            deltas=[carleson_delta(seq.truncate(t)).delta for t in truncations],
        )


class NpSolveTask(InterpolationTask):
    @property
    def name(self) -> str:
        return "np-solve"

    @property
    def description(self) -> str:
        return "Minimal-norm bounded interpolation (Nevanlinna-Pick)"

    @property
    def required_params(self) -> List[str]:
        return ["nodes"]

    @property
    def input_params(self) -> List[str]:
        return ["nodes"]

    def run(self, params: Dict[str, Any], config: HbConfig) -> NpSolveReport:
        data = self.load(params, "nodes")
        if not isinstance(data, dict) or "nodes" not in data or "targets" not in data:
            raise DomainError("np-solve input needs 'nodes' and 'targets'")
        solution = np_solve(
            decode_complex_list(data["nodes"]),
            decode_complex_list(data["targets"]),
            grid_size=self.option(params, "grid_size", config.grids.boundary),
            rel=self.option(params, "tol", config.tolerances.bisection_rel),
        )
        return self.make_report(
            NpSolveReport,
            params,
            t_star=solution.t_star,
            solution=RationalDocument.model_validate(encode_rational(solution.f)),
            residuals=solution.residuals,
            boundary_sup=solution.boundary_sup,
        )


class ConstructTask(InterpolationTask):
    @property
    def name(self) -> str:
        return "construct"

    @property
    def description(self) -> str:
        return "Multiplier of H(b) interpolating given values on a finite sequence"

    @property
    def required_params(self) -> List[str]:
        return ["pair", "seq", "values"]

    @property
    def input_params(self) -> List[str]:
        return ["pair", "seq", "values"]

    def run(self, params: Dict[str, Any], config: HbConfig) -> ConstructReport:
        pair = decode_pair(self.load(params, "pair"))
        seq = decode_sequence(self.load(params, "seq"))
        values = _values(self.load(params, "values"))
        certificate = construct_multiplier(
            pair, seq, values, grid_size=self.option(params, "grid_size", config.grids.boundary)
        )
        norm = hb_norm(certificate.decomposition)
        return self.make_report(
            ConstructReport,
            params,
            F=RationalDocument.model_validate(encode_rational(certificate.F)),
            value_residuals=certificate.value_residuals,
            boundary_sup=certificate.boundary_sup,
            rational_consistency=certificate.rational_consistency,
            p=encode_poly(certificate.decomposition.p),
            hb_norm=encode_float(norm.value),
            split=certificate.split,
            eta=encode_complex_list(certificate.eta) if certificate.eta else [],
            passed=certificate.passed,
            failures=certificate.failures,
        )


class AddPointTask(InterpolationTask):
    @property
    def name(self) -> str:
        return "add-point"

    @property
    def description(self) -> str:
        return "Extends an interpolating multiplier by one more point"

    @property
    def required_params(self) -> List[str]:
        return ["pair", "F", "seq", "point", "value"]

    @property
    def input_params(self) -> List[str]:
        return ["pair", "F", "seq"]

    def run(self, params: Dict[str, Any], config: HbConfig) -> AddPointReport:
        pair = decode_pair(self.load(params, "pair"))
        data = self.load(params, "F")
        if isinstance(data, dict) and "F" in data:
            data = data["F"]
        F = decode_rational(data, checked=False)
        seq = decode_sequence(self.load(params, "seq"))
        lam0 = parse_complex(str(params["point"]))
        v0 = parse_complex(str(params["value"]))

        extended = add_point(F, pair, BlaschkeProduct(zeros=seq), lam0, v0)
        change = float(np.max(np.abs(extended(seq.points) - F(seq.points)))) if len(seq) else 0.0
        residual = abs(complex(extended(lam0)) - v0)
        logger.info(f"Added {lam0}: residual {residual:.2e}, change on zeros {change:.2e}")
        return self.make_report(
            AddPointReport,
            params,
            F=RationalDocument.model_validate(encode_rational(extended)),
            point=encode_complex(lam0),
            value=encode_complex(v0),
            residual=residual,
            max_change_on_zeros=change,
        )
