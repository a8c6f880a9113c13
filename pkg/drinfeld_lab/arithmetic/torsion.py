"""
Torsion, Division Points and the Kummer Pairing

For a Drinfeld module over a finite field k and a level a: the torsion
φ[a] inside the smallest extension k_N containing it, an A/(a)-basis with
coordinate maps, Frobenius matrices, division fibers φ_a(x) = m, Kummer
values σ'(x) − x and the finite-level Δ of a list of points.
"""

import logging
import random
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from math import lcm
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from drinfeld_lab.algebra.factor import field_embedding, monic_polynomials, splitting_degree
from drinfeld_lab.algebra.fields import Element, Field, extension_field
from drinfeld_lab.algebra.linalg import FqMatrix, Vector, reverse_echelon_basis
from drinfeld_lab.algebra.poly import Poly, Var
from drinfeld_lab.algebra.residue_ring import ResidueRing, RingElement
from drinfeld_lab.algebra.smith import invariant_factors
from drinfeld_lab.arithmetic.drinfeld import DrinfeldModule, Isogeny
from drinfeld_lab.arithmetic.ore import OrePoly
from drinfeld_lab.core.config import get_settings
from drinfeld_lab.core.exceptions import DomainError, NonEtaleError, TorsionGeneratorError

logger = logging.getLogger(__name__)

Coordinates = Tuple[RingElement, ...]
RingMatrixRows = List[List[RingElement]]


@dataclass
class Ambient:
    """The extension k_N of the base field k with the canonical embedding of k."""

    base: Field
    field: Field
    degree: int
    embed: Callable[[Element], Element]

    @property
    def base_degree(self) -> int:
        return self.base.fq_dimension

    def frobenius(self, x: Element, times: int = 1) -> Element:
        """x ↦ x^{|k|^times}."""
        return self.field.frob(x, self.base_degree * times)

    def encode(self) -> dict:
        F = self.field
        modulus = [F.base.encode(c) for c in F.modulus] if hasattr(F, "modulus") else None
        return {"degree": self.degree, "cardinality": F.cardinality, "modulus": modulus}


def make_ambient(base: Field, degree: int, rng: Optional[random.Random] = None) -> Ambient:
    if degree == 1:
        return Ambient(base, base, 1, lambda x: x)
    fq = base.constant_field
    target = extension_field(fq, base.fq_dimension * degree)
    return Ambient(base, target, degree, field_embedding(base, target, rng))


def _fq_basis(F: Field) -> List[Element]:
    dim = F.fq_dimension
    fq = F.constant_field
    basis = []
    for j in range(dim):
        unit = [fq.zero] * dim
        unit[j] = fq.one
        basis.append(F.from_fq_coordinates(unit))
    return basis


def operator_matrix(f: OrePoly, ambient: Ambient) -> FqMatrix:
    """F_q-matrix of x ↦ f(x) on the ambient field."""
    F = ambient.field
    columns = [F.fq_coordinates(f.evaluate(b, F, ambient.embed)) for b in _fq_basis(F)]
    return FqMatrix.from_columns(F.constant_field, columns, F.fq_dimension)


def separable_part(f: OrePoly) -> OrePoly:
    """ψ with f = ψ·τ^j, j the τ-valuation of f."""
    j = f.valuation()
    return OrePoly(f.field, f.coeffs[j:])


def ambient_degree(d: DrinfeldModule, a: Poly) -> int:
    """Least N such that ker φ_a is rational over k_N."""
    k = d.base_field
    psi = separable_part(d.phi(a))
    if psi.degree == 0:
        return 1
    q = d.q
    coeffs: Dict[int, Element] = {}
    for i, c in enumerate(psi.coeffs):
        if c != k.zero:
            coeffs[q**i - 1] = c
    g = Poly(k, (coeffs.get(e, k.zero) for e in range(max(coeffs) + 1)), Var.X)
    cap = get_settings().ambient_cap_factor * max(a.degree, 1) * d.rank
    return splitting_degree(g, cap=cap)


class TorsionModule:
    """
    φ[a] ⊂ k_N with an F_q-basis in reverse echelon form, the matrix of φ_t
    on it and, when étale, an A/(a)-basis e_1..e_r with coordinate maps.
    """

    def __init__(
        self,
        module: DrinfeldModule,
        level: Poly,
        ambient: Ambient,
        basis_points: Optional[Sequence[Element]] = None,
        rng: Optional[random.Random] = None,
    ):
        self.module = module
        self.rng = rng
        self.level = level.monic().with_var(module.var)
        self.ambient = ambient
        self.ring = ResidueRing(self.level) if self.level.degree >= 1 else None
        F = ambient.field
        self.fq = F.constant_field

        self.phi_a = module.phi(self.level)
        kernel_vectors = operator_matrix(self.phi_a, ambient).kernel()
        self.kernel_basis: List[Vector] = reverse_echelon_basis(self.fq, kernel_vectors)
        self.pivots: List[int] = [max(i for i, c in enumerate(v) if c != self.fq.zero) for v in self.kernel_basis]
        self.kernel_points: List[Element] = [F.from_fq_coordinates(v) for v in self.kernel_basis]
        self.dimension = len(self.kernel_basis)

        expected = module.rank * self.level.degree
        self.non_etale = module.characteristic().meets(self.level)
        self.etale = not self.non_etale and self.dimension == expected
        if not self.non_etale and self.dimension != expected:
            raise RuntimeError(
                f"torsion of {module} at {self.level} has dimension {self.dimension} in degree {ambient.degree}, expected {expected}"
            )

        self.t_action = self.kernel_matrix(module.phi_t)
        self.basis: List[Element] = []
        self._generator_inverse: Optional[FqMatrix] = None
        if self.etale and self.ring is not None:
            if basis_points is None:
                self.basis = self._greedy_basis()
            else:
                self.basis = list(basis_points)
            self._build_coordinates()

    # F_q-level helpers

    @property
    def count(self) -> int:
        return self.fq.cardinality**self.dimension

    @property
    def rank(self) -> int:
        return self.module.rank

    def kernel_coordinates(self, x: Element) -> Vector:
        """Coordinates of a torsion point in the F_q-basis of φ[a]."""
        F = self.ambient.field
        coords = F.fq_coordinates(x)
        c = tuple(coords[p] for p in self.pivots)
        if self.point_from_kernel(c) != x:
            raise DomainError("element is not an a-torsion point", {"level": str(self.level)})
        return c

    def point_from_kernel(self, c: Sequence[Element]) -> Element:
        F = self.ambient.field
        acc = F.zero
        for ci, b in zip(c, self.kernel_points):
            if ci != self.fq.zero:
                acc = F.add(acc, F.scalar_mul(ci, b))
        return acc

    def kernel_matrix(self, f: OrePoly) -> FqMatrix:
        """F_q-matrix on φ[a] of an operator commuting with φ_a."""
        F = self.ambient.field
        columns = [self.kernel_coordinates(f.evaluate(b, F, self.ambient.embed)) for b in self.kernel_points]
        return FqMatrix.from_columns(self.fq, columns, self.dimension)

    def points(self) -> List[Element]:
        """All torsion points in canonical order."""
        values = list(self.fq.elements())
        return [self.point_from_kernel(c) for c in product(values, repeat=self.dimension)]

    # A/(a)-structure

    def _orbit_columns(self, v: Vector) -> List[Vector]:
        cols = [v]
        for _ in range(1, self.level.degree):
            cols.append(self.t_action.apply(cols[-1]))
        return cols

    def _greedy_basis(self) -> List[Element]:
        """Least points e_1, e_2, ... each enlarging the free submodule by one rank."""
        values = list(self.fq.elements())
        chosen: List[Vector] = []
        columns: List[Vector] = []
        target = self.level.degree
        for c in product(values, repeat=self.dimension):
            if len(chosen) == self.rank:
                break
            if all(x == self.fq.zero for x in c):
                continue
            trial = columns + self._orbit_columns(tuple(c))
            if FqMatrix.from_columns(self.fq, trial, self.dimension).rank() == target * (len(chosen) + 1):
                chosen.append(tuple(c))
                columns = trial
        if len(chosen) != self.rank:
            raise RuntimeError(f"no A/(a)-basis found for torsion at {self.level}")
        return [self.point_from_kernel(c) for c in chosen]

    def _build_coordinates(self) -> None:
        columns: List[Vector] = []
        for e in self.basis:
            columns.extend(self._orbit_columns(self.kernel_coordinates(e)))
        generator = FqMatrix.from_columns(self.fq, columns, self.dimension)
        self._generator_inverse = generator.inverse()

    def require_etale(self) -> None:
        if not self.etale:
            raise NonEtaleError("level meets characteristic", {"level": str(self.level)})

    def coords(self, x: Element) -> Coordinates:
        """x ↦ (c_1, ..., c_r) ∈ (A/(a))^r with x = Σ φ_{c_i}(e_i)."""
        self.require_etale()
        w = self._generator_inverse.apply(self.kernel_coordinates(x))
        n = self.level.degree
        return tuple(tuple(w[i * n : (i + 1) * n]) for i in range(self.rank))

    def point(self, coords: Sequence[RingElement]) -> Element:
        """Inverse of coords."""
        self.require_etale()
        F = self.ambient.field
        acc = F.zero
        for c, e in zip(coords, self.basis):
            acc = F.add(acc, self.module.phi(self.ring.lift(c)).evaluate(e, F, self.ambient.embed))
        return acc

    def matrix_of(self, func: Callable[[Element], Element], target: Optional["TorsionModule"] = None) -> RingMatrixRows:
        """Matrix over A/(a) of an A-linear map, columns = images of the basis."""
        target = target or self
        cols = [target.coords(func(e)) for e in self.basis]
        return [[cols[j][i] for j in range(len(cols))] for i in range(target.rank)]

    def apply_matrix(self, matrix: RingMatrixRows, coords: Sequence[RingElement]) -> Coordinates:
        R = self.ring
        out = []
        for row in matrix:
            acc = R.zero
            for m, c in zip(row, coords):
                acc = R.add(acc, R.mul(m, c))
            out.append(acc)
        return tuple(out)

    def add_coords(self, x: Sequence[RingElement], y: Sequence[RingElement]) -> Coordinates:
        return tuple(self.ring.add(a, b) for a, b in zip(x, y))

    def scale_coords(self, b: Poly, x: Sequence[RingElement]) -> Coordinates:
        bb = self.ring.reduce(b)
        return tuple(self.ring.mul(bb, c) for c in x)

    def extend(self, multiplier: int) -> "TorsionModule":
        """The same torsion and A/(a)-basis inside k_{N·multiplier}."""
        if multiplier == 1:
            return self
        degree = self.ambient.degree * multiplier
        fq = self.ambient.base.constant_field
        target = extension_field(fq, self.ambient.base_degree * degree)
        lift = field_embedding(self.ambient.field, target, self.rng)
        inner = self.ambient.embed
        bigger = Ambient(self.ambient.base, target, degree, lambda x: lift(inner(x)))
        return TorsionModule(
            self.module, self.level, bigger, [lift(e) for e in self.basis] if self.etale else None, self.rng
        )

    def encode(self) -> dict:
        F = self.ambient.field
        payload = {
            "level": self.level.encode(),
            "count": self.count,
            "etale": self.etale,
            "ambient": self.ambient.encode(),
            "t_action_fq": self.t_action.encode(),
        }
        if self.etale:
            payload["basis"] = [F.encode(e) for e in self.basis]
            payload["t_action"] = [[self.ring.encode(x) for x in row] for row in self.matrix_of(self.t_map)]
        return payload

    def t_map(self, x: Element) -> Element:
        return self.module.phi_t.evaluate(x, self.ambient.field, self.ambient.embed)


def torsion_space(d: DrinfeldModule, a: Poly, rng: Optional[random.Random] = None) -> TorsionModule:
    """
    φ[a] over a finite base field. Non-étale levels are flagged rather than
    rejected; their count is below q^{r·deg a} and no basis is produced.
    `rng` drives root finding for field embeddings; the result does not depend on it.
    """
    if d.is_rational:
        raise DomainError("torsion_space needs a module over a finite field")
    if a.is_zero():
        raise DomainError("level must be nonzero")
    a = a.with_var(d.var)
    N = ambient_degree(d, a)
    ambient = make_ambient(d.base_field, N, rng)
    T = TorsionModule(d, a, ambient, rng=rng)
    logger.debug(f"Torsion at {a} for {d}: {T.count} points over k_{N}")
    return T


def frobenius_matrix(T: TorsionModule) -> RingMatrixRows:
    """Matrix of x ↦ x^{|k|} in the A/(a)-basis."""
    T.require_etale()
    return T.matrix_of(T.ambient.frobenius)


def torsion_structure(d: DrinfeldModule, a: Poly) -> List[Poly]:
    """Invariant factors of φ[a](k) as an A-module, from the Smith form of tI − φ_t."""
    if d.is_rational:
        raise DomainError("torsion_structure needs a module over a finite field")
    T = TorsionModule(d, a, make_ambient(d.base_field, 1))
    if T.dimension == 0:
        return []
    fq = T.fq
    t = Poly.gen(fq, d.var)
    rows = [
        [
            (t if i == j else Poly.zero(fq, d.var)) - Poly.constant(fq, T.t_action.rows[i][j], d.var)
            for j in range(T.dimension)
        ]
        for i in range(T.dimension)
    ]
    return invariant_factors(rows)


@dataclass
class DivisionFiber:
    """All x with φ_a(x) = m; a torsor under φ[a]."""

    m: Element
    level: Poly
    torsion: TorsionModule
    base_solution: Element
    degree: int

    @property
    def ambient(self) -> Ambient:
        return self.torsion.ambient

    @cached_property
    def solutions(self) -> List[Element]:
        F = self.ambient.field
        return sorted((F.add(self.base_solution, p) for p in self.torsion.points()), key=F.sort_key)

    def encode(self) -> dict:
        F = self.ambient.field
        return {
            "level": self.level.encode(),
            "degree": self.degree,
            "size": self.torsion.count,
            "base_solution": F.encode(self.base_solution),
        }


def _solve_affine(T: TorsionModule, m: Element) -> Optional[Element]:
    F = T.ambient.field
    matrix = operator_matrix(T.phi_a, T.ambient)
    solution = matrix.solve(F.fq_coordinates(T.ambient.embed(m)))
    if solution is None:
        return None
    x = F.from_fq_coordinates(solution)
    # least element of the coset
    return min((F.add(x, p) for p in T.points()), key=F.sort_key)


def division_fiber(d: DrinfeldModule, a: Poly, m: Element, torsion: Optional[TorsionModule] = None) -> DivisionFiber:
    """
    Solve φ_a(x) = m over k_N and, if needed, over k_{pN}. Fibers of an étale
    level split over k_{pN} because σ' acts on them by translations.
    """
    T = torsion or torsion_space(d, a)
    T.require_etale()
    p = d.base_field.characteristic
    for multiplier in (1, p):
        extended = T.extend(multiplier)
        x = _solve_affine(extended, m)
        if x is not None:
            return DivisionFiber(m, T.level, extended, x, extended.ambient.degree)
    raise RuntimeError(f"division fiber of {m} at {a} does not split over k_{p * T.ambient.degree}")


@dataclass
class KummerValue:
    """⟨σ', m⟩ = σ'(x) − x for the Frobenius σ' of k(φ[a])."""

    m: Element
    level: Poly
    coords: Coordinates
    splitting_degree: int
    fiber_degree: int
    well_defined: bool

    def is_zero(self, ring: ResidueRing) -> bool:
        return all(c == ring.zero for c in self.coords)

    def encode(self, ring: ResidueRing) -> dict:
        return {
            "level": self.level.encode(),
            "value": [ring.encode(c) for c in self.coords],
            "splitting_degree": self.splitting_degree,
            "fiber_degree": self.fiber_degree,
            "well_defined": self.well_defined,
        }


def kummer_value(d: DrinfeldModule, a: Poly, m: Element, torsion: Optional[TorsionModule] = None) -> KummerValue:
    T = torsion or torsion_space(d, a)
    fiber = division_fiber(d, a, m, T)
    E = fiber.torsion
    F = E.ambient.field
    N = T.ambient.degree

    def pairing(x: Element) -> Coordinates:
        return E.coords(F.sub(E.ambient.frobenius(x, N), x))

    value = pairing(fiber.base_solution)
    other = F.add(fiber.base_solution, E.basis[0]) if E.basis else fiber.base_solution
    return KummerValue(m, T.level, value, N, fiber.degree, pairing(other) == value)


@dataclass
class FrobeniusCocycle:
    """σ(x0 + P) = x0 + c + F·P on the fiber, σ the Frobenius of k."""

    matrix: RingMatrixRows
    shift: Coordinates
    fiber: DivisionFiber

    def apply(self, coords: Sequence[RingElement]) -> Coordinates:
        """Coordinates of σ(x0 + P) − x0 for P with the given coordinates."""
        T = self.fiber.torsion
        return T.add_coords(self.shift, T.apply_matrix(self.matrix, coords))

    def power_shift(self, n: int) -> Coordinates:
        """Shift of σ^n: Σ_{i<n} F^i·c."""
        T = self.fiber.torsion
        acc = tuple(T.ring.zero for _ in self.shift)
        term = tuple(self.shift)
        for _ in range(n):
            acc = T.add_coords(acc, term)
            term = T.apply_matrix(self.matrix, term)
        return acc


def frobenius_cocycle(
    d: DrinfeldModule, a: Poly, m: Element, torsion: Optional[TorsionModule] = None
) -> FrobeniusCocycle:
    T = torsion or torsion_space(d, a)
    fiber = division_fiber(d, a, m, T)
    E = fiber.torsion
    F = E.ambient.field
    x0 = fiber.base_solution
    shift = E.coords(F.sub(E.ambient.frobenius(x0), x0))
    return FrobeniusCocycle(frobenius_matrix(E), shift, fiber)


@dataclass
class DeltaImage:
    """Finite-level Δ ⊂ Hom(M, φ[a]) generated by the Kummer tuple of σ'."""

    level: Poly
    generators: List[Tuple[Coordinates, ...]]
    elements: List[Tuple[Coordinates, ...]] = field(default_factory=list)
    kummer_values: List[KummerValue] = field(default_factory=list)

    @property
    def order(self) -> int:
        return len(self.elements)

    def contains(self, element: Tuple[Coordinates, ...]) -> bool:
        return tuple(element) in set(self.elements)


def check_torsion_free(d: DrinfeldModule, gens: Sequence[Element], a: Poly) -> None:
    """Reject generators killed by some φ_b with deg b ≤ deg a."""
    L = d.base_field
    fq = d.fq
    for m in gens:
        if m == L.zero:
            raise TorsionGeneratorError("torsion generator", generator=m, killer=Poly.one(fq, d.var))
        for degree in range(1, a.degree + 1):
            for b in monic_polynomials(fq, degree, d.var):
                if d.phi(b).evaluate(m) == L.zero:
                    raise TorsionGeneratorError(
                        f"generator {m} is killed by φ_{b}",
                        generator=m,
                        killer=b,
                        details={"killed_by": str(b)},
                    )


def delta_image(
    d: DrinfeldModule,
    gens: Sequence[Element],
    a: Poly,
    check_torsion: bool = True,
    torsion: Optional[TorsionModule] = None,
) -> DeltaImage:
    """
    The subgroup of φ[a]^g generated by (⟨σ', m_1⟩, ..., ⟨σ', m_g⟩) and
    closed under the Frobenius action on coordinates.
    """
    if check_torsion:
        check_torsion_free(d, gens, a)
    T = torsion or torsion_space(d, a)
    T.require_etale()
    values = [kummer_value(d, a, m, T) for m in gens]
    generator = tuple(v.coords for v in values)
    F = frobenius_matrix(T)

    zero = tuple(tuple(T.ring.zero for _ in range(T.rank)) for _ in gens)
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for element in frontier:
            candidates = [
                tuple(T.add_coords(x, y) for x, y in zip(element, generator)),
                tuple(T.apply_matrix(F, x) for x in element),
            ]
            for c in candidates:
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt

    def key(element):
        return tuple(T.ring.sort_key(c) for coords in element for c in coords)

    return DeltaImage(T.level, [generator], sorted(seen, key=key), values)


@dataclass
class IsogenyTorsionMap:
    """Matrix of x ↦ f(x) from φ[a] to φ'[a] over A/(a)."""

    matrix: RingMatrixRows
    source: TorsionModule
    target: TorsionModule
    kernel_size: int
    frobenius_compatible: bool

    @property
    def injective(self) -> bool:
        return self.kernel_size == 1


def isogeny_torsion_map(f: Isogeny, a: Poly) -> IsogenyTorsionMap:
    for module in (f.source, f.target):
        module.require_etale(a.with_var(module.var))
    T = torsion_space(f.source, a)
    common = lcm(T.ambient.degree, ambient_degree(f.target, a.with_var(f.target.var)))
    S = T.extend(common // T.ambient.degree)
    S_prime = TorsionModule(f.target, a, S.ambient)
    F = S.ambient.field

    def image(x: Element) -> Element:
        return f.f.evaluate(x, F, S.ambient.embed)

    matrix = S.matrix_of(image, S_prime)
    kernel_size = sum(1 for x in S.points() if image(x) == F.zero)
    fm, fm_prime = frobenius_matrix(S), frobenius_matrix(S_prime)
    R = S.ring
    compatible = _matmul(R, fm_prime, matrix) == _matmul(R, matrix, fm)
    return IsogenyTorsionMap(matrix, S, S_prime, kernel_size, compatible)


def _matmul(R: ResidueRing, A: RingMatrixRows, B: RingMatrixRows) -> RingMatrixRows:
    n, m, p = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = R.zero
            for k in range(m):
                acc = R.add(acc, R.mul(A[i][k], B[k][j]))
            row.append(acc)
        out.append(row)
    return out
