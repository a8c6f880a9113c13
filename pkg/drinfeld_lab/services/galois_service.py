"""
Galois Image Service

Samples Frobenius matrices on φ[a] across the good places of F_q(θ) and
classifies the finite-level image they generate. Per-place torsion bases are
independent, so only conjugacy-invariant data (characteristic polynomial,
order, determinant) enters a verdict; raw-matrix closures are reported but
never trusted.
"""

import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from drinfeld_lab.algebra.matrix_groups import Matrix, MatrixAlgebra, closure
from drinfeld_lab.algebra.poly import Poly, Var
from drinfeld_lab.algebra.residue_ring import ResidueRing, RingElement
from drinfeld_lab.arithmetic.drinfeld import DrinfeldModule, Isotriviality, is_isotrivial
from drinfeld_lab.arithmetic.funcfield import Place
from drinfeld_lab.arithmetic.torsion import TorsionModule, frobenius_matrix, torsion_space
from drinfeld_lab.core.cache import get_cache
from drinfeld_lab.core.config import get_settings
from drinfeld_lab.core.exceptions import (
    AmbientCapError,
    BadReductionError,
    DomainError,
    EnumerationCapError,
)
from drinfeld_lab.services.place_sweep import PlaceSkip, sweep_places

logger = logging.getLogger(__name__)


class ImageVerdict(str, Enum):
    FULL = "full"
    CONTAINS_SL = "contains-SL-index-known"
    CYCLIC_SCALAR = "cyclic-scalar"
    INCONCLUSIVE = "inconclusive"


@lru_cache(maxsize=64)
def matrix_algebra(level: Poly, r: int) -> MatrixAlgebra:
    """Shared table arithmetic for r × r matrices over A/(level)."""
    return MatrixAlgebra(ResidueRing(level.with_var(Var.T)), r)


@dataclass
class FrobeniusSample:
    """Frobenius at one place acting on φ̄[a], in a basis local to that place."""

    place: List[Any]
    place_degree: int
    level: Poly
    matrix: List[List[RingElement]]
    char_poly: Tuple[RingElement, ...]
    det: RingElement
    order: int
    scalar: bool

    @property
    def invariants(self) -> Tuple[Tuple[RingElement, ...], int]:
        return self.char_poly, self.order

    def to_dict(self, ring: ResidueRing) -> Dict[str, Any]:
        return {
            "place": self.place,
            "matrix": [[ring.encode(x) for x in row] for row in self.matrix],
            "char_poly": [ring.encode(c) for c in self.char_poly],
            "det": ring.encode(self.det),
            "order": self.order,
            "scalar": self.scalar,
        }


def make_sample(v: Place, level: Poly, rows: List[List[RingElement]]) -> FrobeniusSample:
    algebra = matrix_algebra(level, len(rows))
    m = algebra.from_rows(rows)
    return FrobeniusSample(
        place=v.encode(),
        place_degree=v.degree,
        level=level,
        matrix=[list(row) for row in rows],
        char_poly=tuple(algebra.elements[c] for c in algebra.charpoly(m)),
        det=algebra.elements[algebra.det(m)],
        order=algebra.order(m),
        scalar=algebra.is_scalar(m),
    )


def reduced_torsion(
    d: DrinfeldModule, a: Poly, v: Place, rng: Optional[random.Random] = None
) -> Union[TorsionModule, PlaceSkip]:
    """φ̄[a] at v, or the reason the place cannot be used."""
    try:
        reduced = d.reduce_at(v)
    except BadReductionError:
        return PlaceSkip(v.encode(), "bad reduction")
    if reduced.characteristic().meets(a.with_var(d.var)):
        return PlaceSkip(v.encode(), "level meets residue characteristic")
    try:
        return torsion_space(reduced, a, rng)
    except AmbientCapError as e:
        return PlaceSkip(v.encode(), f"ambient cap exceeded: {e.message}")


def _frobenius_at_place(
    task: Tuple[DrinfeldModule, Poly, Place, random.Random]
) -> Union[FrobeniusSample, PlaceSkip]:
    d, a, v, rng = task
    T = reduced_torsion(d, a, v, rng)
    if isinstance(T, PlaceSkip):
        return T
    sample = make_sample(v, a, frobenius_matrix(T))
    logger.debug(f"Frobenius at {v}: order {sample.order}")
    return sample


@dataclass
class FrobeniusSampling:
    level: Poly
    bound: int
    samples: List[FrobeniusSample] = field(default_factory=list)
    skips: List[PlaceSkip] = field(default_factory=list)


def sample_frobenii(d: DrinfeldModule, a: Poly, bound: int, workers: int = 1, seed: int = 0) -> FrobeniusSampling:
    """
    One sample per usable place of degree ≤ bound, in place order.

    Bad reduction and residue characteristics dividing a become skip records;
    a level meeting the characteristic of d itself is rejected.
    """
    if not d.is_rational:
        raise DomainError("Frobenius sampling needs a module over F_q(θ)")
    a = a.monic().with_var(d.var)
    d.require_etale(a)
    results = sweep_places(d.fq, bound, _frobenius_at_place, lambda v, rng: (d, a, v, rng), workers, seed)

    sampling = FrobeniusSampling(a, bound)
    for result in results:
        if isinstance(result, PlaceSkip):
            sampling.skips.append(result)
        else:
            sampling.samples.append(result)
    logger.info(f"Sampled {len(sampling.samples)} Frobenius elements at level {a}; {len(sampling.skips)} places skipped")
    return sampling


def alternative_basis_sample(d: DrinfeldModule, a: Poly, v: Place) -> Optional[FrobeniusSample]:
    """
    The sample at v recomputed after a fixed change of torsion basis:
    e_1 ↦ u·e_1 for the largest unit u when r = 1, (e_1, e_2) ↦ (e_2, e_1 + e_2)
    otherwise.
    """
    T = reduced_torsion(d, a, v)
    if isinstance(T, PlaceSkip):
        return None
    R = T.ring
    r = T.rank
    if r == 1:
        u = R.units()[-1]
        coords = [(u,)]
    else:
        unit = [tuple(R.one if i == j else R.zero for i in range(r)) for j in range(r)]
        coords = [unit[1], T.add_coords(unit[0], unit[1])] + unit[2:]
    new_basis = [T.point(c) for c in coords]
    rebased = TorsionModule(T.module, T.level, T.ambient, new_basis)
    return make_sample(v, a, frobenius_matrix(rebased))


@dataclass
class GroupClosure:
    order: Optional[int]
    elements: Optional[frozenset]
    overflow: bool = False


def group_closure(mats: Sequence[Matrix], algebra: MatrixAlgebra, cap: Optional[int] = None) -> GroupClosure:
    """Subgroup generated by invertible matrices; overflow above the cap instead of an error."""
    cap = cap or get_settings().group_closure_cap
    for m in mats:
        if not algebra.is_invertible(m):
            raise DomainError("group closure needs invertible matrices")
    try:
        group = closure(mats, algebra.mul, algebra.identity, cap)
    except EnumerationCapError:
        logger.warning(f"Group closure exceeded {cap} elements")
        return GroupClosure(None, None, overflow=True)
    return GroupClosure(len(group), group)


@dataclass
class ImageClassification:
    verdict: ImageVerdict
    justification: str
    index: Optional[int] = None
    observed_classes: List[int] = field(default_factory=list)
    covering: Optional[Dict[str, Any]] = None


def covering_subgroups(algebra: MatrixAlgebra, observed: Sequence[int], classes: Sequence[Tuple[Matrix, ...]], cap: int) -> Dict[str, Any]:
    """
    Search the subgroups meeting every observed conjugacy class.

    The first class contributes its least element (conjugating fixes it);
    every further uncovered class branches over its elements. Any subgroup
    meeting all observed classes contains, up to conjugacy, one of the
    leaves visited here.
    """
    gl_size = algebra.gl_order
    class_of: Dict[Matrix, int] = {g: i for i, cls in enumerate(classes) for g in cls}
    required = sorted(set(observed))
    visited: set = set()
    leaves: List[frozenset] = []

    def search(H: frozenset, gens: List[Matrix]) -> None:
        if H in visited or len(H) == gl_size:
            return
        visited.add(H)
        present = {class_of[g] for g in H}
        missing = [c for c in required if c not in present]
        if not missing:
            leaves.append(H)
            return
        for x in classes[missing[0]]:
            search(closure(gens + [x], algebra.mul, algebra.identity, cap), gens + [x])

    start = classes[required[0]][0]
    search(closure([start], algebra.mul, algebra.identity, cap), [start])
    logger.debug(f"Covering search visited {len(visited)} subgroups, {len(leaves)} proper leaves")
    return {
        "proper_leaves": len(leaves),
        "leaf_orders": sorted(len(H) for H in leaves),
        "all_contain_sl": all(algebra.contains_sl(H) for H in leaves),
    }


def classify_image(
    samples: Sequence[FrobeniusSample],
    a: Poly,
    r: int,
    isotrivial: bool = False,
    q: Optional[int] = None,
) -> ImageClassification:
    if not samples:
        raise DomainError("classification needs at least one sample")
    settings = get_settings()
    algebra = matrix_algebra(a, r)
    R = algebra.ring
    mats = [algebra.from_rows(s.matrix) for s in samples]
    det_group = algebra.det_subgroup(mats)
    det_index = R.unit_count // len(det_group)

    if r == 1:
        sampled = closure(mats, algebra.mul, algebra.identity, R.unit_count)
        if len(sampled) == R.unit_count:
            return ImageClassification(ImageVerdict.FULL, "sampled scalars generate (A/(a))^×", 1)
        if isotrivial:
            return ImageClassification(
                ImageVerdict.CYCLIC_SCALAR, "isotrivial module with a scalar image", R.unit_count // len(sampled)
            )
        return ImageClassification(
            ImageVerdict.CONTAINS_SL,
            f"sampled scalars generate a subgroup of index {R.unit_count // len(sampled)}",
            R.unit_count // len(sampled),
        )

    if isotrivial and all(s.scalar for s in samples):
        return ImageClassification(ImageVerdict.CYCLIC_SCALAR, "all samples are scalar and the module is isotrivial")

    if algebra.gl_order > settings.gl_enumeration_cap:
        return ImageClassification(
            ImageVerdict.INCONCLUSIVE, f"|GL_{r}| = {algebra.gl_order} exceeds the enumeration cap"
        )

    classes = algebra.conjugacy_classes(settings.gl_enumeration_cap)
    class_of = {g: i for i, cls in enumerate(classes) for g in cls}
    observed = sorted({class_of[m] for m in mats})
    key = {"q": q or R.field.cardinality, "level": a.with_var(Var.T).encode(), "r": r, "classes": observed}
    covering = get_cache().get_or_compute(
        "subgroups", key, lambda: covering_subgroups(algebra, observed, classes, settings.group_closure_cap)
    )

    if covering["proper_leaves"] == 0:
        return ImageClassification(
            ImageVerdict.FULL, "no proper subgroup meets every observed conjugacy class", 1, observed, covering
        )
    if covering["all_contain_sl"]:
        return ImageClassification(
            ImageVerdict.CONTAINS_SL,
            f"every proper covering subgroup contains SL_{r}; determinant index {det_index}",
            det_index,
            observed,
            covering,
        )
    return ImageClassification(
        ImageVerdict.INCONCLUSIVE,
        f"{covering['proper_leaves']} proper subgroups meet every observed class",
        None,
        observed,
        covering,
    )


@dataclass
class ImageReport:
    module: Dict[str, Any]
    level: Poly
    bound: int
    samples: List[FrobeniusSample]
    skips: List[PlaceSkip]
    det_group: List[RingElement]
    invariant_pairs: List[Tuple[Tuple[RingElement, ...], int]]
    closure_order: Optional[int]
    classification: ImageClassification
    det_one_proportion: float
    scalar_proportion: float

    def to_dict(self) -> Dict[str, Any]:
        R = ResidueRing(self.level.with_var(Var.T))
        c = self.classification
        return {
            "module": self.module,
            "level": self.level.encode(),
            "B": self.bound,
            "samples": [s.to_dict(R) for s in self.samples],
            "skips": [s.to_dict() for s in self.skips],
            "det_group": [R.encode(x) for x in self.det_group],
            "det_group_order": len(self.det_group),
            "invariant_pairs": [
                {"char_poly": [R.encode(x) for x in cp], "order": order} for cp, order in self.invariant_pairs
            ],
            "closure_order": self.closure_order,
            "verdict": c.verdict.value,
            "justification": c.justification,
            "index": c.index,
            "observed_classes": c.observed_classes,
            "covering": c.covering,
            "det_one_proportion": self.det_one_proportion,
            "scalar_proportion": self.scalar_proportion,
        }


def image_report(d: DrinfeldModule, a: Poly, bound: int, workers: int = 1, seed: int = 0) -> ImageReport:
    """Sample, close and classify the image at level a."""
    sampling = sample_frobenii(d, a, bound, workers, seed)
    if not sampling.samples:
        raise DomainError("no usable places below the bound", {"B": bound})
    a = sampling.level
    r = d.rank
    algebra = matrix_algebra(a, r)
    R = algebra.ring
    mats = [algebra.from_rows(s.matrix) for s in sampling.samples]
    raw = group_closure(mats, algebra)
    pairs = sorted(
        {s.invariants for s in sampling.samples},
        key=lambda p: (tuple(R.sort_key(c) for c in p[0]), p[1]),
    )
    isotrivial = is_isotrivial(d) == Isotriviality.YES
    classification = classify_image(sampling.samples, a, r, isotrivial, d.q)
    n = len(sampling.samples)
    return ImageReport(
        module=d.encode(),
        level=a,
        bound=bound,
        samples=sampling.samples,
        skips=sampling.skips,
        det_group=algebra.det_subgroup(mats),
        invariant_pairs=pairs,
        closure_order=raw.order,
        classification=classification,
        det_one_proportion=sum(1 for s in sampling.samples if s.det == R.one) / n,
        scalar_proportion=sum(1 for s in sampling.samples if s.scalar) / n,
    )
