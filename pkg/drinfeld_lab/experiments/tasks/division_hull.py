"""
Division Hull Experiment

Finds the K-rational points x with φ_a(x) ∈ M for monic a of degree ≤ B_a
and reports the structure of the found hull modulo M.
"""

import logging
from typing import Any, Dict, List

from pydantic import Field

from drinfeld_lab.services.kummer_service import division_hull

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


class DivisionHullParameters(ExperimentParameters):
    generators: List[Any] = Field(..., min_length=1, description="generators of M in F_q(θ)")
    bound: int = Field(..., ge=1, description="largest degree B_a of the division levels")


@register_experiment(
    kind=ExperimentKind.DIVISION_HULL,
    description="Division hull of a finitely generated submodule of F_q(θ)",
    version="1.0.0",
)
class DivisionHullExperiment(Experiment):

    parameters_model = DivisionHullParameters
    bases = (BaseKind.RATIONAL,)

    def execute(self, context: ExperimentContext) -> Dict[str, Any]:
        params: DivisionHullParameters = context.parameters
        gens = context.elements(params.generators)
        return division_hull(context.module, gens, params.bound).to_dict()

    def verdicts(self, payload: Dict[str, Any]) -> List[Verdict]:
        return [Verdict(payload["verdict"])]
