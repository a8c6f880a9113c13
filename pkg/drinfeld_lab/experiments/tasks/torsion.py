"""
Torsion Experiment

Counts φ[a] for each configured level. Over a finite base the module itself
is used; over F_q(θ) the module is reduced at every place of degree ≤ the
place bound and each reduction is counted.

For étale levels the count must be exactly q^{r·deg a}; levels meeting the
characteristic must come out strictly smaller.
"""

import logging
import random
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import Field

from drinfeld_lab.algebra.poly import Poly
from drinfeld_lab.arithmetic.drinfeld import DrinfeldModule
from drinfeld_lab.arithmetic.funcfield import Place
from drinfeld_lab.arithmetic.torsion import frobenius_matrix, torsion_space, torsion_structure
from drinfeld_lab.core.exceptions import AmbientCapError, BadReductionError
from drinfeld_lab.services.place_sweep import PlaceSkip, sweep_places

from ..base import (
    BaseKind,
    Experiment,
    ExperimentConfig,
    ExperimentContext,
    ExperimentKind,
    ExperimentParameters,
    ProgressStage,
    ValidationResult,
    Verdict,
    register_experiment,
)

logger = logging.getLogger(__name__)


class TorsionParameters(ExperimentParameters):
    levels: List[List[Any]] = Field(..., min_length=1, description="levels a as coefficient lists in t")
    place_bound: Optional[int] = Field(default=None, ge=1, description="largest place degree (rational base only)")


def count_entry(d: DrinfeldModule, a: Poly, rng: Optional[random.Random] = None) -> Dict[str, Any]:
    """One torsion count with its expected value."""
    T = torsion_space(d, a, rng)
    expected = d.q ** (d.rank * a.degree)
    entry: Dict[str, Any] = {
        "level": T.level.encode(),
        "count": T.count,
        "expected": expected,
        "etale": T.etale,
        "ambient_degree": T.ambient.degree,
        "ok": T.count == expected if T.etale else T.count < expected,
    }
    if T.etale:
        entry["frobenius"] = [[T.ring.encode(x) for x in row] for row in frobenius_matrix(T)]
    return entry


def _counts_at_place(
    task: Tuple[DrinfeldModule, List[Poly], Place, random.Random]
) -> Union[Dict[str, Any], PlaceSkip]:
    d, levels, v, rng = task
    try:
        reduced = d.reduce_at(v)
    except BadReductionError as e:
        return PlaceSkip(v.encode(), e.message)
    try:
        counts = [count_entry(reduced, a, rng) for a in levels]
    except AmbientCapError as e:
        return PlaceSkip(v.encode(), f"ambient cap exceeded: {e.message}")
    return {"place": v.encode(), "counts": counts}


@register_experiment(
    kind=ExperimentKind.TORSION,
    description="Exact torsion counts |φ[a]| against q^(r·deg a)",
    version="1.0.0",
)
class TorsionExperiment(Experiment):
    """Torsion counts over a finite base or across reductions at places."""

    parameters_model = TorsionParameters

    def check_parameters(self, parameters: TorsionParameters, config: ExperimentConfig) -> ValidationResult:
        result = ValidationResult()
        if config.module.base == BaseKind.RATIONAL and parameters.place_bound is None:
            result.add_error("place_bound is required over F_q(θ)")
        if config.module.base == BaseKind.FINITE and parameters.place_bound is not None:
            result.add_error("place_bound only applies over F_q(θ)")
        return result

    def execute(self, context: ExperimentContext) -> Dict[str, Any]:
        d = context.module
        params: TorsionParameters = context.parameters
        levels = [context.level(level) for level in params.levels]

        if not d.is_rational:
            counts = []
            for i, a in enumerate(levels):
                entry = count_entry(d, a)
                entry["structure"] = [f.encode() for f in torsion_structure(d, a)]
                counts.append(entry)
                context.progress.update_progress(i + 1, len(levels))
            return {"module": d.encode(), "counts": counts, "places": [], "skips": []}

        context.progress.start_stage(ProgressStage.SWEEPING)
        results = sweep_places(
            d.fq,
            params.place_bound,
            _counts_at_place,
            lambda v, rng: (d, levels, v, rng),
            context.workers,
            context.seed,
        )
        return {
            "module": d.encode(),
            "B": params.place_bound,
            "places": [r for r in results if not isinstance(r, PlaceSkip)],
            "skips": [r.to_dict() for r in results if isinstance(r, PlaceSkip)],
        }

    def verdicts(self, payload: Dict[str, Any]) -> List[Verdict]:
        entries = list(payload.get("counts", []))
        for place in payload["places"]:
            entries.extend(place["counts"])
        if not entries:
            return [Verdict.INCONCLUSIVE]
        return [Verdict.HOLDS if all(e["ok"] for e in entries) else Verdict.FAILS]
