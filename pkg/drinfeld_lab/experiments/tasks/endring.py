"""
Endomorphism Experiment

Solves u·φ_t = φ'_t·u inside a window of τ-degree ≤ D (and θ-degree ≤ E over
F_q(θ)). With no target module this is the endomorphism ring in the window.
"""

import logging
from typing import Any, Dict, List, Optional

from pydantic import Field

from drinfeld_lab.arithmetic.drinfeld import hom_space, is_isotrivial

from ..base import (
    Experiment,
    ExperimentContext,
    ExperimentKind,
    ExperimentParameters,
    ModuleSpec,
    Verdict,
    register_experiment,
)

logger = logging.getLogger(__name__)


class EndringParameters(ExperimentParameters):
    target: Optional[List[Any]] = Field(default=None, description="φ'_t coefficients; defaults to the module itself")
    max_tau_degree: Optional[int] = Field(default=None, ge=0, description="window D; defaults to 2r")
    max_theta_degree: Optional[int] = Field(default=None, ge=0, description="window E over F_q(θ)")


@register_experiment(
    kind=ExperimentKind.ENDRING,
    description="Homomorphisms and endomorphisms in a bounded window",
    version="1.0.0",
)
class EndringExperiment(Experiment):

    parameters_model = EndringParameters

    def execute(self, context: ExperimentContext) -> Dict[str, Any]:
        d = context.module
        params: EndringParameters = context.parameters
        target = d
        if params.target is not None:
            spec = context.config.module.model_copy(update={"phi_t": params.target})
            target = context.build_module(ModuleSpec.model_validate(spec.model_dump()))
        D = params.max_tau_degree if params.max_tau_degree is not None else 2 * d.rank

        window = hom_space(d, target, D, params.max_theta_degree)
        logger.info(f"Hom window D={D}: dimension {window.dimension}, extra = {window.extra}")
        return {
            "module": d.encode(),
            "target": target.encode(),
            "D": window.max_tau_degree,
            "E": window.max_theta_degree,
            "basis": [u.encode()["coeffs"] for u in window.basis],
            "dimension": window.dimension,
            "scalar_dimension": window.scalar_dimension,
            "extra": window.extra,
            "ring": window.ring,
            "isotrivial": is_isotrivial(d).value,
            "characteristic": d.characteristic().encode(),
        }

    def verdicts(self, payload: Dict[str, Any]) -> List[Verdict]:
        return []
