"""
Tasks for rational pairs: mate, pair-from-mate, verify-pair, corona.
"""

import logging
from typing import Any, Dict, List

from hbinterp.core.config import HbConfig
from hbinterp.core.errors import DomainError
from hbinterp.core.models import CoronaReport, PairDocument, PairReport, VerificationReport
from hbinterp.core.serialization import decode_pair, decode_rational, decode_zeros, encode_pair
from hbinterp.core.task_base import TaskBase, TaskCategory
from hbinterp.numerics.pair import (
    BoundaryZeroSet,
    RationalPair,
    corona_lower_bound,
    local_pair,
    pair_from_mate,
    pythagorean_mate,
    verify_pair,
)


logger = logging.getLogger(__name__)


class PairTask(TaskBase):
    """Shared plumbing of the pair tasks."""

    @property
    def category(self) -> TaskCategory:
        return TaskCategory.PAIR

    def grid_and_tol(self, params: Dict[str, Any], config: HbConfig) -> Dict[str, Any]:
        return {
            "grid_size": self.option(params, "grid_size", config.grids.boundary),
            "tol": self.option(params, "tol", config.tolerances.pair_identity),
        }

    def load_pair(self, params: Dict[str, Any]) -> RationalPair:
        return decode_pair(self.load(params, "pair"))

    def pair_report(self, pair: RationalPair, params: Dict[str, Any], config: HbConfig) -> PairReport:
        kw = self.grid_and_tol(params, config)
        return self.make_report(
            PairReport,
            params,
            pair=PairDocument.model_validate(encode_pair(pair)),
            verification=verify_pair(pair, **kw),
        )


class MateTask(PairTask):
    @property
    def name(self) -> str:
        return "mate"

    @property
    def description(self) -> str:
        return "Pythagorean mate a of a rational b (Fejer-Riesz factorization)"

    @property
    def required_params(self) -> List[str]:
        return ["b"]

    @property
    def input_params(self) -> List[str]:
        return ["b"]

    def run(self, params: Dict[str, Any], config: HbConfig) -> PairReport:
        data = self.load(params, "b")
        if isinstance(data, dict) and "b" in data:
            data = data["b"]
        b = decode_rational(data)
        pair = pythagorean_mate(b, **self.grid_and_tol(params, config))
        return self.pair_report(pair, params, config)


class PairFromMateTask(PairTask):
    @property
    def name(self) -> str:
        return "pair-from-mate"

    @property
    def description(self) -> str:
        return "Pair (a, b) from a prescribed outer mate a or boundary zero set"

    @property
    def input_params(self) -> List[str]:
        return ["a"]

    def validate_params(self, params: Dict[str, Any]) -> List[str]:
        errors = super().validate_params(params)
        if params.get("a") is None and not params.get("zeros"):
            errors.append("Either an 'a' input file or boundary zeros are required")
        return errors

    def run(self, params: Dict[str, Any], config: HbConfig) -> PairReport:
        kw = self.grid_and_tol(params, config)
        if params.get("a") is not None:
            pair = pair_from_mate(decode_rational(self.load(params, "a")), **kw)
        else:
            zeros = BoundaryZeroSet.from_pairs(
                (complex(re, im), int(m)) for re, im, m in params["zeros"]
            )
            pair = local_pair(zeros, grid_size=kw["grid_size"])
        return self.pair_report(pair, params, config)


class VerifyPairTask(PairTask):
    @property
    def name(self) -> str:
        return "verify-pair"

    @property
    def description(self) -> str:
        return "Checks |a|^2 + |b|^2 = 1, outerness of a and a(0) > 0"

    @property
    def required_params(self) -> List[str]:
        return ["pair"]

    @property
    def input_params(self) -> List[str]:
        return ["pair"]

    def run(self, params: Dict[str, Any], config: HbConfig) -> VerificationReport:
        data = self.load(params, "pair")
        if "pair" in data:
            data = data["pair"]
        try:
            pair = RationalPair(
                b=decode_rational(data["b"], checked=False),
                a=decode_rational(data["a"], checked=False),
                zeros=decode_zeros(data["zeros"]),
            )
        except (KeyError, TypeError) as e:
            raise DomainError(f"Malformed pair document: {e}") from e
        verification = verify_pair(pair, **self.grid_and_tol(params, config))
        if not verification.passed:
            logger.warning(f"Pair verification failed: {verification.failures}")
        return self.make_report(
            VerificationReport, params, verification=verification, passed=verification.passed
        )


class CoronaTask(PairTask):
    @property
    def name(self) -> str:
        return "corona"

    @property
    def description(self) -> str:
        return "Lower bound of |a|^2 + |b|^2 over the disk"

    @property
    def required_params(self) -> List[str]:
        return ["pair"]

    @property
    def input_params(self) -> List[str]:
        return ["pair"]

    def run(self, params: Dict[str, Any], config: HbConfig) -> CoronaReport:
        radial = self.option(params, "radial", config.grids.corona_radial)
        angular = self.option(params, "angular", config.grids.corona_angular)
        delta = corona_lower_bound(self.load_pair(params), radial, angular)
        return self.make_report(CoronaReport, params, delta=delta, radial=radial, angular=angular)
