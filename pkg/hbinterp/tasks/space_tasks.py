"""
Tasks on H(b) and local Dirichlet spaces: dnorm, blaschke, gram, membership.
"""

import logging
import math
from typing import Any, Dict, List

import numpy as np

from hbinterp.core.config import HbConfig
from hbinterp.core.errors import DomainError
from hbinterp.core.models import BlaschkeReport, DirichletReport, GramDocument, MembershipReport
from hbinterp.core.serialization import (
    decode_function,
    decode_pair,
    decode_poly,
    decode_sequence,
    encode_complex,
    encode_complex_list,
    encode_float,
    parse_complex,
)
from hbinterp.core.task_base import TaskBase, TaskCategory
from hbinterp.numerics.disk import (
    BlaschkeProduct,
    ahern_clark_sum,
    as_circle_point,
    blaschke_radial_derivatives,
    blaschke_taylor_at_boundary,
    partial_product_taylor_tail,
)
from hbinterp.numerics.hb_space import (
    dirichlet_blaschke_quadrature,
    dirichlet_partial_products,
    gram,
    kernel_norm_sums,
    local_dirichlet_estimate,
    range_membership_curve,
)
from hbinterp.numerics.interpolation import doubling_truncations
from hbinterp.numerics.series import SeriesSource


logger = logging.getLogger(__name__)

RADIAL_SAMPLES = 65


class SpaceTask(TaskBase):
    @property
    def category(self) -> TaskCategory:
        return TaskCategory.SPACE


def single_factor_energy(lam: complex, zeta: complex, N: int) -> float:
    """D_zeta^N of the Blaschke factor at lam in closed form."""
    return (1.0 - abs(lam) ** 2) * abs(lam) ** (2 * (N - 1)) / abs(zeta - lam) ** (2 * N)


class DirichletTask(SpaceTask):
    @property
    def name(self) -> str:
        return "dnorm"

    @property
    def description(self) -> str:
        return "Local Dirichlet energy D_zeta^N(f)"

    @property
    def required_params(self) -> List[str]:
        return ["f", "zeta", "order"]

    @property
    def input_params(self) -> List[str]:
        return ["f"]

    def run(self, params: Dict[str, Any], config: HbConfig) -> DirichletReport:
        f = decode_function(self.load(params, "f"))
        zeta = as_circle_point(parse_complex(str(params["zeta"])))
        N = int(params["order"])
        method = params.get("method") or "coefficients"

        if method == "quadrature":
            if f.blaschke is None:
                raise DomainError("The quadrature path needs a Blaschke product")
            value = dirichlet_blaschke_quadrature(
                f.blaschke,
                zeta,
                N,
                grid=config.grids.quadrature_start,
                cap=config.grids.quadrature_cap,
                rel=self.option(params, "tol", config.tolerances.quadrature_rel),
            )
            error = 0.0
        elif method == "coefficients":
            estimate = local_dirichlet_estimate(f, zeta, N)
            value, error = estimate.value, estimate.error
        else:
            raise DomainError(f"Unknown method '{method}' (coefficients or quadrature)")

        closed_form = None
        if f.source == SeriesSource.BLASCHKE and f.blaschke is not None and f.blaschke.degree == 1:
            closed_form = single_factor_energy(complex(f.blaschke.points[0]), zeta, N)
        logger.info(f"D^{N} at {zeta}: {value:.12g} ({method})")
        return self.make_report(
            DirichletReport,
            params,
            zeta=encode_complex(zeta),
            order=N,
            value=encode_float(value),
            error=encode_float(error),
            method=method,
            closed_form=closed_form,
        )


class BlaschkeTask(SpaceTask):
    @property
    def name(self) -> str:
        return "blaschke"

    @property
    def description(self) -> str:
        return "Boundary derivatives of a finite Blaschke product (Ahern-Clark)"

    @property
    def required_params(self) -> List[str]:
        return ["seq", "zeta"]

    @property
    def input_params(self) -> List[str]:
        return ["seq"]

    def run(self, params: Dict[str, Any], config: HbConfig) -> BlaschkeReport:
        seq = decode_sequence(self.load(params, "seq"))
        zeta = as_circle_point(parse_complex(str(params["zeta"])))
        order = int(self.option(params, "derivs", 1))
        if order < 0:
            raise DomainError(f"derivs must be >= 0, got {order}")
        B = BlaschkeProduct(zeros=seq)

        taylor = blaschke_taylor_at_boundary(B, zeta, order)
        derivatives = taylor * np.array([math.factorial(j) for j in range(order + 1)])
        grid = np.linspace(0.0, 1.0, RADIAL_SAMPLES)
        radial_max = [
            float(np.max(np.abs(blaschke_radial_derivatives(B, zeta, j, grid)))) for j in range(order + 1)
        ]

        energies: List[Any] = []
        sums: List[Any] = []
        if order >= 1 and len(seq):
            bound = dirichlet_partial_products(seq, zeta, order)
            energies = [encode_float(x) for x in bound.energies]
            sums = [encode_float(x) for x in bound.sums]

        return self.make_report(
            BlaschkeReport,
            params,
            zeta=encode_complex(zeta),
            degree=B.degree,
            derivatives=encode_complex_list(derivatives),
            taylor=encode_complex_list(taylor),
            ahern_clark=[encode_float(ahern_clark_sum(seq, zeta, j)) for j in range(order + 1)],
            radial_grid=grid.tolist(),
            radial_max=[encode_float(x) for x in radial_max],
            taylor_changes=partial_product_taylor_tail(B, zeta, order).tolist(),
            partial_energies=energies,
            partial_sums=sums,
        )


class GramTask(SpaceTask):
    @property
    def name(self) -> str:
        return "gram"

    @property
    def description(self) -> str:
        return "Extreme eigenvalues of normalized H(b) kernel Gram matrices"

    @property
    def required_params(self) -> List[str]:
        return ["pair", "seq"]

    @property
    def input_params(self) -> List[str]:
        return ["pair", "seq"]

    def run(self, params: Dict[str, Any], config: HbConfig) -> GramDocument:
        pair = decode_pair(self.load(params, "pair"))
        seq = decode_sequence(self.load(params, "seq"))
        cap = self.option(params, "cap", config.grids.gram_cap)
        truncations = [t for t in doubling_truncations(min(len(seq), cap)) if t >= 1]

        min_eigs, max_eigs = [], []
        for t in truncations:
            report = gram(pair, seq.truncate(t), cap)
            min_eigs.append(report.min_eig)
            max_eigs.append(report.max_eig)
            logger.debug(f"Gram of size {t}: [{report.min_eig:.6g}, {report.max_eig:.6g}]")
        sums = kernel_norm_sums(pair, seq)
        return self.make_report(
            GramDocument,
            params,
            truncations=truncations,
            min_eigs=min_eigs,
            max_eigs=max_eigs,
            kernel_norm_sums=[encode_float(sums[t - 1]) for t in truncations],
        )


class MembershipTask(SpaceTask):
    @property
    def name(self) -> str:
        return "membership"

    @property
    def description(self) -> str:
        return "Residual curve of f in the Toeplitz range M(conj a)"

    @property
    def required_params(self) -> List[str]:
        return ["symbol", "f"]

    @property
    def input_params(self) -> List[str]:
        return ["symbol", "f"]

    def run(self, params: Dict[str, Any], config: HbConfig) -> MembershipReport:
        data = self.load(params, "symbol")
        a = decode_poly(data["num"] if isinstance(data, dict) else data)
        f = decode_function(self.load(params, "f"))
        curve = range_membership_curve(
            a,
            f,
            start=int(self.option(params, "start", 16)),
            doublings=int(self.option(params, "doublings", 4)),
            budget=params.get("budget"),
        )
        return self.make_report(MembershipReport, params, symbol=encode_complex_list(a.coeffs), curve=curve)
