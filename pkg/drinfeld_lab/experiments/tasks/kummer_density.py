"""
Kummer Density Experiment

Measures how often φ̄_a(x) = m̄ is solvable in the residue field at places of
degree ≤ B and compares the proportion with the exact density of the image
model G ⋉ Δ. G is the Galois image pinned down by an image classification at
level a over places of degree ≤ image_bound; Δ comes from global
divisibility of m.
"""

import logging
from typing import Any, Dict, List

from pydantic import Field

from drinfeld_lab.services.galois_service import image_report
from drinfeld_lab.services.kummer_service import image_model_group, kummer_density, kummer_model

from ..base import (
    BaseKind,
    Experiment,
    ExperimentContext,
    ExperimentKind,
    ExperimentParameters,
    ProgressStage,
    Verdict,
    register_experiment,
)

logger = logging.getLogger(__name__)


class KummerDensityParameters(ExperimentParameters):
    m: Any = Field(..., description="point m ∈ F_q(θ)")
    level: List[Any] = Field(..., description="level a as a coefficient list in t")
    place_bound: int = Field(..., ge=1, description="largest place degree B of the density sweep")
    image_bound: int = Field(default=6, ge=1, description="largest place degree used to pin down G")


@register_experiment(
    kind=ExperimentKind.KUMMER_DENSITY,
    description="Divisibility density of a point against the exact image-model oracle",
    version="1.0.0",
)
class KummerDensityExperiment(Experiment):

    parameters_model = KummerDensityParameters
    bases = (BaseKind.RATIONAL,)

    def execute(self, context: ExperimentContext) -> Dict[str, Any]:
        d = context.module
        params: KummerDensityParameters = context.parameters
        m = context.element(params.m)
        a = context.level(params.level)

        context.progress.start_stage(ProgressStage.CLASSIFYING)
        image = image_report(d, a, params.image_bound, context.workers, context.seed)
        group = image_model_group(image)
        image_summary = {
            "B": params.image_bound,
            "verdict": image.classification.verdict.value,
            "det_group_order": len(image.det_group),
        }
        if group is None:
            logger.warning(f"Image at level {a} is {image.classification.verdict.value}; no density oracle")
            return {
                "module": d.encode(),
                "m": d.base_field.encode(m),
                "level": a.encode(),
                "image": image_summary,
                "verdict": Verdict.INCONCLUSIVE.value,
                "skips": [],
            }

        model = kummer_model(d, m, a, group)
        context.progress.start_stage(ProgressStage.SWEEPING)
        report = kummer_density(d, m, a, params.place_bound, model, context.workers, context.seed)
        return {**report.to_dict(), "image": image_summary}

    def verdicts(self, payload: Dict[str, Any]) -> List[Verdict]:
        return [Verdict(payload["verdict"])]
