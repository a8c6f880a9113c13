"""
Restriction Check Experiment

Restricts φ over a finite field to ψ = φ|F_q[b], an F_q[u]-module of rank
r·deg b, and compares ψ[w] with φ[w(b)]: both are the same set of points, so
counts and Frobenius orders must agree, and the count must be
q^{r·deg b·deg w}. When w(b) is a power of a single prime the two torsion
modules are the two sides of the restriction isomorphism.
"""

import logging
import random
from typing import Any, Dict, List

from pydantic import Field

from drinfeld_lab.algebra.factor import factor
from drinfeld_lab.algebra.poly import Var
from drinfeld_lab.arithmetic.torsion import TorsionModule, frobenius_matrix, torsion_space
from drinfeld_lab.services.galois_service import matrix_algebra

from ..base import (
    BaseKind,
    Experiment,
    ExperimentContext,
    ExperimentKind,
    ExperimentParameters,
    Verdict,
    register_experiment,
)

logger = logging.getLogger(__name__)


class RestrictCheckParameters(ExperimentParameters):
    b: List[Any] = Field(..., description="b ∈ F_q[t] of positive degree")
    w: List[Any] = Field(..., description="level w ∈ F_q[u]")


def frobenius_order(T: TorsionModule) -> int:
    algebra = matrix_algebra(T.level, T.rank)
    return algebra.order(algebra.from_rows(frobenius_matrix(T)))


@register_experiment(
    kind=ExperimentKind.RESTRICT_CHECK,
    description="Compare ψ[w] for ψ = φ|F_q[b] with φ[w(b)]",
    version="1.0.0",
)
class RestrictCheckExperiment(Experiment):

    parameters_model = RestrictCheckParameters
    bases = (BaseKind.FINITE,)

    def execute(self, context: ExperimentContext) -> Dict[str, Any]:
        d = context.module
        params: RestrictCheckParameters = context.parameters
        b = context.level(params.b)
        w = context.level(params.w, Var.U)
        psi = d.restrict(b)
        psi.require_etale(w)
        wb = w.compose(b).monic()
        d.require_etale(wb)

        rng = random.Random(context.seed)
        restricted = torsion_space(psi, w, rng)
        direct = torsion_space(d, wb, rng)
        factors = factor(wb, rng)
        prime_powers = []
        for p, e in factors:
            T = torsion_space(d, p**e, rng)
            prime_powers.append({"prime": p.encode(), "exponent": e, "count": T.count})
        product_count = 1
        for entry in prime_powers:
            product_count *= entry["count"]

        expected = d.q ** (d.rank * b.degree * w.degree)
        return {
            "module": d.encode(),
            "restricted": psi.encode(),
            "b": b.encode(),
            "w": w.encode(),
            "w_of_b": wb.encode(),
            "unique_prime": len(factors) == 1,
            "expected": expected,
            "restricted_count": restricted.count,
            "direct_count": direct.count,
            "prime_powers": prime_powers,
            "product_count": product_count,
            "restricted_frobenius_order": frobenius_order(restricted),
            "direct_frobenius_order": frobenius_order(direct),
        }

    def verdicts(self, payload: Dict[str, Any]) -> List[Verdict]:
        holds = (
            payload["restricted_count"] == payload["expected"]
            and payload["direct_count"] == payload["expected"]
            and payload["product_count"] == payload["expected"]
            and payload["restricted_frobenius_order"] == payload["direct_frobenius_order"]
        )
        return [Verdict.HOLDS if holds else Verdict.FAILS]
