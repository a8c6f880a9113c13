"""
Frobenius Experiment

Samples the Frobenius matrix on φ̄[a] at every good place of degree ≤ B and
recomputes each sample after a fixed change of torsion basis. The two must
agree on conjugacy invariants. For the Carlitz module the matrix at (π) must
also equal the scalar π(t) mod a.
"""

import logging
from typing import Any, Dict, List

from pydantic import Field

from drinfeld_lab.algebra.poly import Poly, Var
from drinfeld_lab.algebra.residue_ring import ResidueRing
from drinfeld_lab.arithmetic.drinfeld import carlitz_module
from drinfeld_lab.arithmetic.funcfield import Place, place_rng
from drinfeld_lab.services.galois_service import FrobeniusSample, alternative_basis_sample, sample_frobenii

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


class FrobeniusParameters(ExperimentParameters):
    level: List[Any] = Field(..., description="level a as a coefficient list in t")
    place_bound: int = Field(..., ge=1, description="largest place degree B")
    check_bases: bool = Field(default=True, description="recompute each sample in a second torsion basis")


@register_experiment(
    kind=ExperimentKind.FROBENIUS,
    description="Frobenius matrices on φ[a] at the good places of degree ≤ B",
    version="1.0.0",
)
class FrobeniusExperiment(Experiment):

    parameters_model = FrobeniusParameters
    bases = (BaseKind.RATIONAL,)

    def execute(self, context: ExperimentContext) -> Dict[str, Any]:
        d = context.module
        params: FrobeniusParameters = context.parameters
        a = context.level(params.level)

        context.progress.start_stage(ProgressStage.SWEEPING)
        sampling = sample_frobenii(d, a, params.place_bound, context.workers, context.seed)
        R = ResidueRing(sampling.level.with_var(Var.T))

        basis_checks = []
        if params.check_bases:
            for i, sample in enumerate(sampling.samples):
                pi = Poly.decode(d.fq, sample.place, Var.THETA)
                v = Place.from_poly(pi, place_rng(context.seed, pi))
                other = alternative_basis_sample(d, sampling.level, v)
                basis_checks.append(
                    {
                        "place": sample.place,
                        "matrix": other.to_dict(R)["matrix"] if other is not None else None,
                        "agrees": other is not None and other.invariants == sample.invariants,
                    }
                )
                context.progress.update_progress(i + 1, len(sampling.samples))

        payload: Dict[str, Any] = {
            "module": d.encode(),
            "level": sampling.level.encode(),
            "B": params.place_bound,
            "samples": [s.to_dict(R) for s in sampling.samples],
            "skips": [s.to_dict() for s in sampling.skips],
            "basis_checks": basis_checks,
        }
        if d == carlitz_module(d.q):
            payload["reciprocity"] = [self._reciprocity(s, R) for s in sampling.samples]
        return payload

    @staticmethod
    def _reciprocity(sample: FrobeniusSample, R: ResidueRing) -> Dict[str, Any]:
        pi = Poly.decode(R.field, sample.place, Var.T)
        expected = R.reduce(pi)
        return {
            "place": sample.place,
            "expected": R.encode(expected),
            "agrees": sample.matrix == [[expected]],
        }

    def verdicts(self, payload: Dict[str, Any]) -> List[Verdict]:
        if not payload["samples"]:
            return [Verdict.INCONCLUSIVE]
        checks = payload["basis_checks"] + payload.get("reciprocity", [])
        return [Verdict.HOLDS if all(c["agrees"] for c in checks) else Verdict.FAILS]
