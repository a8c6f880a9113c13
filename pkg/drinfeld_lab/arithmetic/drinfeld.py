"""
Drinfeld Modules

Drinfeld F_q[t]-modules given by φ_t ∈ L{τ} over F_q(θ) or over a finite
field: the map a ↦ φ_a, characteristic, reduction at places, restriction to
F_q[b], isogenies, windowed endomorphism/homomorphism spaces and the
isotriviality criterion.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

from drinfeld_lab.algebra.factor import minimal_polynomial
from drinfeld_lab.algebra.fields import Element, Field, FiniteField
from drinfeld_lab.algebra.linalg import FqMatrix
from drinfeld_lab.algebra.poly import Poly, Var
from drinfeld_lab.arithmetic.funcfield import Place, RatFunc, RationalFunctionField, rational_function_field, reduce
from drinfeld_lab.arithmetic.ore import OrePoly
from drinfeld_lab.core.exceptions import BadReductionError, DomainError, NonEtaleError

logger = logging.getLogger(__name__)


class CharacteristicKind(str, Enum):
    GENERIC = "generic"
    SPECIAL = "special"


@dataclass(frozen=True)
class Characteristic:
    """Generic, or Special(p0) with p0 monic irreducible in the operator variable."""

    kind: CharacteristicKind
    p0: Optional[Poly] = None

    @classmethod
    def generic(cls) -> "Characteristic":
        return cls(CharacteristicKind.GENERIC)

    @classmethod
    def special(cls, p0: Poly) -> "Characteristic":
        return cls(CharacteristicKind.SPECIAL, p0)

    @property
    def is_generic(self) -> bool:
        return self.kind == CharacteristicKind.GENERIC

    def meets(self, a: Poly) -> bool:
        """True when the level a shares a factor with p0."""
        if self.is_generic or self.p0 is None:
            return False
        return not self.p0.with_var(a.var).gcd(a).is_one()

    def encode(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "p0": self.p0.encode() if self.p0 is not None else None}

    def __str__(self) -> str:
        return "generic" if self.is_generic else f"special({self.p0})"


class Isotriviality(str, Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


class DrinfeldModule:
    """
    φ: A → L{τ}, determined by φ_t.

    `var` names the operator variable (t, or u after restriction to F_q[b]).
    """

    def __init__(self, phi_t: OrePoly, var: Var = Var.T, subring: Optional[Poly] = None):
        if phi_t.degree < 1:
            raise DomainError("φ_t must have positive τ-degree", {"phi_t": str(phi_t)})
        self.phi_t = phi_t
        self.base_field: Field = phi_t.field
        self.var = var
        self.subring = subring
        self._cache: Dict[Poly, OrePoly] = {}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DrinfeldModule) and self.phi_t == other.phi_t and self.var == other.var

    def __hash__(self) -> int:
        return hash((self.phi_t, self.var))

    def __repr__(self) -> str:
        return f"DrinfeldModule(φ_{self.var.value} = {self.phi_t} over {self.base_field})"

    @property
    def q(self) -> int:
        return self.base_field.q

    @property
    def fq(self) -> Field:
        return self.base_field.constant_field

    @property
    def rank(self) -> int:
        return self.phi_t.degree

    @property
    def gamma(self) -> Element:
        return self.phi_t.constant_term()

    @property
    def is_rational(self) -> bool:
        return isinstance(self.base_field, RationalFunctionField)

    def phi(self, a: Poly) -> OrePoly:
        """φ_a by Horner recursion in the Ore ring."""
        key = a.with_var(self.var)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        L = self.base_field
        acc = OrePoly.zero(L)
        for c in reversed(a.coeffs):
            acc = acc * self.phi_t + OrePoly.constant(L, L.from_constant(c))
        self._cache[key] = acc
        return acc

    def a_poly(self, coeffs: Sequence[int]) -> Poly:
        return Poly.from_ints(self.fq, coeffs, self.var)

    def characteristic(self) -> Characteristic:
        L = self.base_field
        gamma = self.gamma
        if self.is_rational:
            if not L.is_constant(gamma):
                return Characteristic.generic()
            c = L.to_constant(gamma)
            return Characteristic.special(Poly(self.fq, (self.fq.neg(c), self.fq.one), self.var))
        return Characteristic.special(minimal_polynomial(gamma, L, self.var))

    def require_etale(self, a: Poly) -> None:
        if a.is_zero():
            raise DomainError("level must be nonzero")
        if self.characteristic().meets(a):
            raise NonEtaleError("level meets characteristic", {"level": str(a), "characteristic": str(self.characteristic())})

    def reduce_at(self, v: Place) -> "DrinfeldModule":
        if not self.is_rational:
            raise DomainError("reduction needs a module over F_q(θ)")
        k = v.residue_field
        coeffs = []
        for c in self.phi_t.coeffs:
            coeffs.append(reduce(c, v))
        reduced = OrePoly(k, coeffs)
        if reduced.degree != self.rank:
            raise BadReductionError(f"bad reduction at place {v}: leading coefficient vanishes", place=v.encode())
        return DrinfeldModule(reduced, self.var, self.subring)

    def restrict(self, b: Poly) -> "DrinfeldModule":
        """ψ = φ|F_q[b] as a module over F_q[u], u ↦ b."""
        if b.degree < 1:
            raise DomainError("restriction needs a nonconstant b", {"b": str(b)})
        return DrinfeldModule(self.phi(b), Var.U, b.with_var(self.var))

    def twist(self, c: Element) -> "DrinfeldModule":
        """c^{-1}·φ_t·c, an isomorphic module."""
        L = self.base_field
        twisted = self.phi_t.scale_right(c).scale_left(L.inv(c))
        return DrinfeldModule(twisted, self.var, self.subring)

    def encode(self) -> Dict[str, Any]:
        base: Any = "rational"
        if isinstance(self.base_field, FiniteField) and self.base_field.cardinality != self.q:
            base = {"modulus": [self.base_field.base.encode(c) for c in self.base_field.modulus]}
        elif not self.is_rational:
            base = "constant"
        return {"q": self.q, "base": base, "phi_t": self.phi_t.encode()["coeffs"], "var": self.var.value}


def phi(d: DrinfeldModule, a: Poly) -> OrePoly:
    return d.phi(a)


def characteristic(d: DrinfeldModule) -> Characteristic:
    return d.characteristic()


def reduce_at(d: DrinfeldModule, v: Place) -> DrinfeldModule:
    return d.reduce_at(v)


def restrict(d: DrinfeldModule, b: Poly) -> DrinfeldModule:
    return d.restrict(b)


def carlitz_module(q: int) -> DrinfeldModule:
    K = rational_function_field(q)
    return DrinfeldModule(OrePoly(K, (K.theta, K.one)))


@dataclass
class Isogeny:
    """f: source → target with f·φ_t = φ'_t·f."""

    f: OrePoly
    source: DrinfeldModule
    target: DrinfeldModule

    def __post_init__(self) -> None:
        if self.source.base_field != self.target.base_field:
            raise DomainError("isogeny between modules over different fields")
        if self.f.is_zero():
            raise DomainError("an isogeny must be nonzero")
        if self.f * self.source.phi_t != self.target.phi_t * self.f:
            raise DomainError("f does not intertwine φ_t and φ'_t", {"f": str(self.f)})

    @property
    def degree(self) -> int:
        return self.f.degree


@dataclass
class HomSpace:
    """
    F_q-basis of {u : deg_τ u ≤ D, u·φ_t = φ'_t·u} inside the search window.

    scalar_dimension is the F_q-dimension of φ(A) inside the window.
    """

    basis: List[OrePoly]
    max_tau_degree: int
    max_theta_degree: Optional[int]
    scalar_dimension: int = 0
    ring: str = "A"
    extra: bool = field(init=False)

    def __post_init__(self) -> None:
        self.extra = len(self.basis) > self.scalar_dimension
        if self.extra:
            self.ring = "window-End"

    @property
    def dimension(self) -> int:
        return len(self.basis)


def _coordinates_finite(L: Field, u: OrePoly, length: int) -> List[Element]:
    out: List[Element] = []
    for i in range(length):
        out.extend(L.fq_coordinates(u[i]))
    return out


def _scalar_rank(d: DrinfeldModule, window: Sequence[OrePoly], max_tau: int) -> int:
    """
    F_q-dimension of {φ_b : b ∈ A} ∩ span(window), as
    rank V + rank W − rank [V W] for V the φ_{t^j} of τ-degree ≤ max_tau.
    """
    L = d.base_field
    fq = L.constant_field
    scalars = [d.phi(Poly.monomial(fq, j, var=d.var)) for j in range(max_tau // d.rank + 1)]
    vectors = scalars + list(window)
    length = max_tau + 1
    if isinstance(L, RationalFunctionField):
        common = Poly.one(fq, Var.THETA)
        for u in vectors:
            for c in u.coeffs:
                common = (common * c.den) // common.gcd(c.den)
        cleared = [[u[i].num * (common // u[i].den) for i in range(length)] for u in vectors]
        width = max((p.degree for row in cleared for p in row), default=-1) + 1
        columns = [[p[e] for p in row for e in range(width)] for row in cleared]
    else:
        columns = [_coordinates_finite(L, u, length) for u in vectors]
    joint = FqMatrix.from_columns(fq, columns, len(columns[0])).rank()
    return len(scalars) + len(window) - joint


def hom_space(
    d: DrinfeldModule, d_prime: DrinfeldModule, max_tau_degree: int, max_theta_degree: Optional[int] = None
) -> HomSpace:
    """
    Solve u·φ_t = φ'_t·u for u = Σ_{i≤D} u_i τ^i.

    The equation is F_q-linear in the F_q-coordinates of the u_i. Over F_q(θ)
    the u_i range over polynomials in θ of degree ≤ E; over a finite base they
    range over the whole field.
    """
    L = d.base_field
    if d_prime.base_field != L:
        raise DomainError("hom_space needs modules over the same field")
    fq = L.constant_field
    D = max_tau_degree
    r = max(d.rank, d_prime.rank)
    out_length = D + r + 1

    unknowns: List[OrePoly] = []
    if isinstance(L, RationalFunctionField):
        if max_theta_degree is None:
            max_theta_degree = 2 * max(c.theta_degree() for c in d.phi_t.coeffs)
        for i in range(D + 1):
            for e in range(max_theta_degree + 1):
                coeff = RatFunc.make(Poly.monomial(fq, e, var=Var.THETA))
                unknowns.append(OrePoly(L, (L.zero,) * i + (coeff,)))
    else:
        max_theta_degree = None
        dim = L.fq_dimension
        for i in range(D + 1):
            for j in range(dim):
                unit = [fq.zero] * dim
                unit[j] = fq.one
                unknowns.append(OrePoly(L, (L.zero,) * i + (L.from_fq_coordinates(unit),)))

    images = [u * d.phi_t - d_prime.phi_t * u for u in unknowns]

    if isinstance(L, RationalFunctionField):
        columns: List[List[Element]] = [[] for _ in images]
        for k in range(out_length):
            lcm = Poly.one(fq, Var.THETA)
            for img in images:
                den = img[k].den
                lcm = (lcm * den) // lcm.gcd(den)
            scaled = [img[k].num * (lcm // img[k].den) for img in images]
            width = max((s.degree for s in scaled), default=-1) + 1
            for col, s in zip(columns, scaled):
                col.extend(s[e] for e in range(width))
    else:
        columns = [_coordinates_finite(L, img, out_length) for img in images]

    nrows = len(columns[0]) if columns else 0
    system = FqMatrix.from_columns(fq, columns, nrows)
    basis: List[OrePoly] = []
    for vector in system.kernel():
        u = OrePoly.zero(L)
        for coeff, unknown in zip(vector, unknowns):
            if coeff != fq.zero:
                u = u + unknown.scale_left(L.from_constant(coeff))
        if u * d.phi_t != d_prime.phi_t * u:
            raise AssertionError(f"homomorphism candidate {u} fails the commutation identity")
        basis.append(u)

    scalar_dimension = _scalar_rank(d, basis, D) if d == d_prime else 0

    logger.debug(f"hom_space window (D={D}, E={max_theta_degree}) has dimension {len(basis)}")
    return HomSpace(basis, D, max_theta_degree, scalar_dimension)


def is_isotrivial(d: DrinfeldModule) -> Isotriviality:
    """
    Over F_q(θ): γ must be constant, and for every i ≥ 1 with a_i ≠ 0 the
    ratio a_i^{q^r−1}/a_r^{q^i−1} must lie in F_q. Over a finite base every
    module is isotrivial.
    """
    L = d.base_field
    if not d.is_rational:
        return Isotriviality.YES
    if not L.is_constant(d.gamma):
        return Isotriviality.NO
    r = d.rank
    a_r = d.phi_t[r]
    lead_power = {}
    for i in range(1, r + 1):
        a_i = d.phi_t[i]
        if a_i == L.zero:
            continue
        numerator = L.div(L.frob(a_i, r), a_i)
        if i not in lead_power:
            lead_power[i] = L.div(L.frob(a_r, i), a_r)
        if not L.is_constant(L.div(numerator, lead_power[i])):
            return Isotriviality.NO
    return Isotriviality.YES
