"""
Steinhaus random sequence tasks: simulate, three-series, dyadic, exceedance.
"""

import logging
from typing import Any, Dict, List

from hbinterp.core.config import HbConfig
from hbinterp.core.errors import DomainError
from hbinterp.core.models import DyadicDocument, ExceedanceReport, SimulationReport, ThreeSeriesDocument
from hbinterp.core.serialization import parse_family
from hbinterp.core.task_base import TaskBase, TaskCategory
from hbinterp.numerics.families import RadiiFamily
from hbinterp.numerics.random_seq import dyadic_counts, monte_carlo_exceedance, three_series, zero_one_experiment


logger = logging.getLogger(__name__)


class RandomTask(TaskBase):
    @property
    def category(self) -> TaskCategory:
        return TaskCategory.RANDOM

    def family(self, params: Dict[str, Any], count: int) -> RadiiFamily:
        family = parse_family(str(params["family"]))
        if family.count == 0:
            family = family.with_count(count)
        return family

    def order(self, params: Dict[str, Any]) -> int:
        M = int(self.option(params, "M", 1))
        if M < 1:
            raise DomainError(f"M must be >= 1, got {M}")
        return M


class SimulateTask(RandomTask):
    @property
    def name(self) -> str:
        return "simulate"

    @property
    def description(self) -> str:
        return "0-1 law experiment: trial sums of X_n at the worst boundary zero"

    @property
    def required_params(self) -> List[str]:
        return ["family"]

    def run(self, params: Dict[str, Any], config: HbConfig) -> SimulationReport:
        sim = config.simulation
        truncation = int(self.option(params, "truncate", sim.truncation))
        result = zero_one_experiment(
            self.family(params, truncation),
            self.order(params),
            trials=int(self.option(params, "trials", sim.trials)),
            truncation=truncation,
            threshold=float(self.option(params, "threshold", sim.threshold)),
            master_seed=int(self.option(params, "seed", sim.master_seed)),
            threads=int(self.option(params, "threads", sim.threads)),
        )
        if not result.nondecreasing:
            logger.warning("Exceedance fractions decrease across truncations")
        # the worker count does not change the result
        report_params = {k: v for k, v in params.items() if k != "threads"}
        return self.make_report(SimulationReport, report_params, result=result)


class ThreeSeriesTask(RandomTask):
    @property
    def name(self) -> str:
        return "three-series"

    @property
    def description(self) -> str:
        return "Kolmogorov three-series diagnostics of sum X_n"

    @property
    def required_params(self) -> List[str]:
        return ["family"]

    def run(self, params: Dict[str, Any], config: HbConfig) -> ThreeSeriesDocument:
        count = int(self.option(params, "count", 1024))
        result = three_series(self.family(params, count), self.order(params))
        return self.make_report(ThreeSeriesDocument, params, result=result)


class DyadicTask(RandomTask):
    @property
    def name(self) -> str:
        return "dyadic"

    @property
    def description(self) -> str:
        return "Dyadic counts N_k and the equivalent series"

    @property
    def required_params(self) -> List[str]:
        return ["family"]

    def run(self, params: Dict[str, Any], config: HbConfig) -> DyadicDocument:
        count = int(self.option(params, "count", 1024))
        result = dyadic_counts(self.family(params, count), self.order(params))
        return self.make_report(DyadicDocument, params, result=result)


class ExceedanceTask(RandomTask):
    @property
    def name(self) -> str:
        return "exceedance"

    @property
    def description(self) -> str:
        return "Exact P(X > 1) against its Monte-Carlo frequency"

    @property
    def required_params(self) -> List[str]:
        return ["r"]

    def run(self, params: Dict[str, Any], config: HbConfig) -> ExceedanceReport:
        check = monte_carlo_exceedance(
            float(params["r"]),
            self.order(params),
            draws=int(self.option(params, "draws", 100_000)),
            seed=int(self.option(params, "seed", config.simulation.master_seed)),
        )
        return self.make_report(ExceedanceReport, params, result=check, z_score=check.z_score)
