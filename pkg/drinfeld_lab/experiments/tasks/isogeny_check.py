"""
Isogeny Check Experiment

For an isogeny f: φ → φ' over a finite field, compute the induced map
φ[a] → φ'[a] at each level and check that it commutes with Frobenius.
Isogenous modules must also share their characteristic.
"""

import logging
from typing import Any, Dict, List

from pydantic import Field

from drinfeld_lab.arithmetic.drinfeld import Isogeny
from drinfeld_lab.arithmetic.ore import OrePoly
from drinfeld_lab.arithmetic.torsion import isogeny_torsion_map

from ..base import (
    BaseKind,
    Experiment,
    ExperimentContext,
    ExperimentKind,
    ExperimentParameters,
    ModuleSpec,
    ProgressStage,
    Verdict,
    register_experiment,
)

logger = logging.getLogger(__name__)


class IsogenyCheckParameters(ExperimentParameters):
    target: List[Any] = Field(..., min_length=2, description="φ'_t coefficients")
    f: List[Any] = Field(..., min_length=1, description="coefficients of f in τ")
    levels: List[List[Any]] = Field(..., min_length=1, description="levels a as coefficient lists in t")


@register_experiment(
    kind=ExperimentKind.ISOGENY_CHECK,
    description="Torsion maps induced by an isogeny and their Frobenius compatibility",
    version="1.0.0",
)
class IsogenyCheckExperiment(Experiment):

    parameters_model = IsogenyCheckParameters
    bases = (BaseKind.FINITE,)

    def execute(self, context: ExperimentContext) -> Dict[str, Any]:
        d = context.module
        params: IsogenyCheckParameters = context.parameters
        spec = context.config.module.model_copy(update={"phi_t": params.target})
        target = context.build_module(ModuleSpec.model_validate(spec.model_dump()))
        isogeny = Isogeny(OrePoly(d.base_field, context.elements(params.f)), d, target)

        context.progress.start_stage(ProgressStage.COMPUTING)
        maps = []
        levels = [context.level(level) for level in params.levels]
        for i, a in enumerate(levels):
            result = isogeny_torsion_map(isogeny, a)
            R = result.source.ring
            maps.append(
                {
                    "level": result.source.level.encode(),
                    "matrix": [[R.encode(x) for x in row] for row in result.matrix],
                    "kernel_size": result.kernel_size,
                    "injective": result.injective,
                    "frobenius_compatible": result.frobenius_compatible,
                }
            )
            context.progress.update_progress(i + 1, len(levels))

        same_characteristic = d.characteristic() == target.characteristic()
        if not same_characteristic:
            logger.warning(f"Characteristics differ: {d.characteristic()} and {target.characteristic()}")
        return {
            "module": d.encode(),
            "target": target.encode(),
            "f": isogeny.f.encode()["coeffs"],
            "degree": isogeny.degree,
            "maps": maps,
            "characteristics": [d.characteristic().encode(), target.characteristic().encode()],
            "same_characteristic": same_characteristic,
        }

    def verdicts(self, payload: Dict[str, Any]) -> List[Verdict]:
        holds = payload["same_characteristic"] and all(m["frobenius_compatible"] for m in payload["maps"])
        return [Verdict.HOLDS if holds else Verdict.FAILS]
