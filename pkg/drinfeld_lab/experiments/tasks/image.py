"""
Image Experiment

Classifies the image of Galois on φ[a] from the Frobenius samples at places
of degree ≤ B.
"""

import logging
from typing import Any, Dict, List

from pydantic import Field

from drinfeld_lab.services.galois_service import image_report

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


class ImageParameters(ExperimentParameters):
    level: List[Any] = Field(..., description="level a as a coefficient list in t")
    place_bound: int = Field(..., ge=1, description="largest place degree B")


@register_experiment(
    kind=ExperimentKind.IMAGE,
    description="Classify the mod-a Galois image from sampled Frobenius elements",
    version="1.0.0",
)
class ImageExperiment(Experiment):

    parameters_model = ImageParameters
    bases = (BaseKind.RATIONAL,)

    def execute(self, context: ExperimentContext) -> Dict[str, Any]:
        params: ImageParameters = context.parameters
        context.progress.start_stage(ProgressStage.SWEEPING)
        report = image_report(
            context.module, context.level(params.level), params.place_bound, context.workers, context.seed
        )
        context.progress.start_stage(ProgressStage.CLASSIFYING)
        logger.info(f"Image at level {report.level}: {report.classification.verdict.value}")
        return report.to_dict()

    def verdicts(self, payload: Dict[str, Any]) -> List[Verdict]:
        return [Verdict(payload["verdict"])]
