"""
Index Bound Experiment

Certifies (a·b·c mod a)·Hom_R(M, φ[a]) ⊆ Δ_a for a module over a finite
field and a finitely generated M ⊂ k.
"""

import logging
from typing import Any, Dict, List

from pydantic import Field

from drinfeld_lab.services.kummer_service import verify_index_bound

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


class IndexBoundParameters(ExperimentParameters):
    generators: List[Any] = Field(..., min_length=1, description="generators of M in k")
    level: List[Any] = Field(..., description="level a as a coefficient list in t")


@register_experiment(
    kind=ExperimentKind.INDEX_BOUND,
    description="Index-bound certificate for an isotrivial module over a finite field",
    version="1.0.0",
)
class IndexBoundExperiment(Experiment):

    parameters_model = IndexBoundParameters
    bases = (BaseKind.FINITE,)

    def execute(self, context: ExperimentContext) -> Dict[str, Any]:
        params: IndexBoundParameters = context.parameters
        report = verify_index_bound(
            context.module, context.elements(params.generators), context.level(params.level)
        )
        return report.to_dict()

    def verdicts(self, payload: Dict[str, Any]) -> List[Verdict]:
        return [Verdict(payload["verdict"])]
