"""
Rational Function Field

K = F_q(θ) as a coefficient Field, its finite places (π) with the reduction
θ ↦ least root of π in the residue field, and rational root finding for
polynomials with coefficients in K.
"""

import logging
import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from typing import Any, Dict, List, Optional, Tuple

from drinfeld_lab.algebra.factor import factor, irreducibles_up_to, roots_of_irreducible
from drinfeld_lab.algebra.fields import Element, Field, constant_field, extension_field
from drinfeld_lab.algebra.poly import Poly, Var
from drinfeld_lab.core.exceptions import BadReductionError, DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RatFunc:
    """n/d in lowest terms with d monic; zero is 0/1."""

    num: Poly
    den: Poly

    def __post_init__(self) -> None:
        if self.den.is_zero():
            raise DomainError("zero denominator")

    @classmethod
    def make(cls, num: Poly, den: Optional[Poly] = None) -> "RatFunc":
        num = num.with_var(Var.THETA)
        den = Poly.one(num.field, Var.THETA) if den is None else den.with_var(Var.THETA)
        if den.is_zero():
            raise DomainError("zero denominator")
        if num.is_zero():
            return cls(num, Poly.one(num.field, Var.THETA))
        g = num.gcd(den)
        num, den = num // g, den // g
        lead = num.field.inv(den.leading)
        return cls(num.scale(lead), den.scale(lead))

    @property
    def field(self) -> Field:
        return self.num.field

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def is_constant(self) -> bool:
        return self.den.is_one() and self.num.degree <= 0

    def __add__(self, other: "RatFunc") -> "RatFunc":
        if self.den == other.den:
            return RatFunc.make(self.num + other.num, self.den)
        return RatFunc.make(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc.make(self.num * other.num, self.den * other.den)

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise DomainError("division by zero in F_q(θ)")
        return RatFunc.make(self.den, self.num)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        return self * other.inverse()

    def theta_degree(self) -> int:
        """max(deg n, deg d)."""
        return max(self.num.degree, self.den.degree)

    def sort_key(self) -> Tuple:
        return (self.den.sort_key(), self.num.sort_key())

    def encode(self) -> Dict[str, List[Any]]:
        return {"num": self.num.encode(), "den": self.den.encode()}

    def __str__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RatFunc({self})"


class RationalFunctionField(Field):
    """F_q(θ) with elements RatFunc."""

    def __init__(self, fq: Field):
        self.fq = fq

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalFunctionField) and self.fq == other.fq

    def __hash__(self) -> int:
        return hash(("rational", self.fq))

    def __str__(self) -> str:
        return f"F_{self.fq.cardinality}(θ)"

    @property
    def characteristic(self) -> int:
        return self.fq.characteristic

    @property
    def q(self) -> int:
        return self.fq.cardinality

    @property
    def cardinality(self) -> None:
        return None

    @property
    def constant_field(self) -> Field:
        return self.fq

    @cached_property
    def zero(self) -> RatFunc:
        return RatFunc(Poly.zero(self.fq, Var.THETA), Poly.one(self.fq, Var.THETA))

    @cached_property
    def one(self) -> RatFunc:
        return RatFunc(Poly.one(self.fq, Var.THETA), Poly.one(self.fq, Var.THETA))

    @cached_property
    def theta(self) -> RatFunc:
        return RatFunc(Poly.gen(self.fq, Var.THETA), Poly.one(self.fq, Var.THETA))

    def poly(self, p: Poly) -> RatFunc:
        return RatFunc.make(p)

    def from_ints(self, num: List[int], den: Optional[List[int]] = None) -> RatFunc:
        n = Poly.from_ints(self.fq, num, Var.THETA)
        d = Poly.from_ints(self.fq, den, Var.THETA) if den else None
        return RatFunc.make(n, d)

    def add(self, a: RatFunc, b: RatFunc) -> RatFunc:
        return a + b

    def neg(self, a: RatFunc) -> RatFunc:
        return -a

    def mul(self, a: RatFunc, b: RatFunc) -> RatFunc:
        return a * b

    def inv(self, a: RatFunc) -> RatFunc:
        return a.inverse()

    def from_int(self, n: int) -> RatFunc:
        return RatFunc.make(Poly.constant(self.fq, self.fq.from_int(n), Var.THETA))

    def from_constant(self, c: Element) -> RatFunc:
        return RatFunc.make(Poly.constant(self.fq, c, Var.THETA))

    def to_constant(self, a: RatFunc) -> Element:
        if not a.is_constant():
            raise DomainError("element is not in the constant field", {"element": str(a)})
        return a.num[0]

    def is_constant(self, a: RatFunc) -> bool:
        return a.is_constant()

    def frob(self, a: RatFunc, k: int = 1) -> RatFunc:
        """(n/d)^{q^k} = n(θ^{q^k})/d(θ^{q^k}) since the coefficients lie in F_q."""
        if k < 0:
            raise DomainError("inverse Frobenius is not defined on F_q(θ)")
        step = self.q**k
        zero = self.fq.zero

        def spread(p: Poly) -> Poly:
            out = [zero] * (p.degree * step + 1) if p.coeffs else []
            for i, c in enumerate(p.coeffs):
                out[i * step] = c
            return Poly(self.fq, out, Var.THETA)

        return RatFunc(spread(a.num), spread(a.den))

    def scalar_mul(self, c: Element, a: RatFunc) -> RatFunc:
        return RatFunc(a.num.scale(c), a.den)

    def sort_key(self, a: RatFunc) -> Tuple:
        return a.sort_key()

    def random_element(self, rng: random.Random, degree: int = 3) -> RatFunc:
        num = Poly(self.fq, [self.fq.random_element(rng) for _ in range(degree + 1)], Var.THETA)
        den = Poly(self.fq, [self.fq.random_element(rng) for _ in range(degree)] + [self.fq.one], Var.THETA)
        return RatFunc.make(num, den)

    def random_polynomial(self, rng: random.Random, degree: int = 3) -> RatFunc:
        return RatFunc.make(Poly(self.fq, [self.fq.random_element(rng) for _ in range(degree + 1)], Var.THETA))

    def encode(self, a: RatFunc) -> Dict[str, List[Any]]:
        return a.encode()

    def decode(self, data: Any) -> RatFunc:
        if isinstance(data, dict):
            num = Poly.decode(self.fq, data["num"], Var.THETA)
            den = Poly.decode(self.fq, data.get("den", [1]), Var.THETA)
            return RatFunc.make(num, den)
        if isinstance(data, list):
            return RatFunc.make(Poly.decode(self.fq, data, Var.THETA))
        return self.from_int(int(data))


@lru_cache(maxsize=None)
def rational_function_field(q: int) -> RationalFunctionField:
    return RationalFunctionField(constant_field(q))


@dataclass(frozen=True)
class Place:
    """A finite place (π) of F_q(θ) with its residue field and the image of θ."""

    pi: Poly
    residue_field: Field
    root: Element

    @classmethod
    def from_poly(cls, pi: Poly, rng: Optional[random.Random] = None) -> "Place":
        from drinfeld_lab.algebra.factor import is_irreducible

        pi = pi.monic().with_var(Var.THETA)
        if not is_irreducible(pi):
            raise DomainError("place generator is not irreducible", {"pi": pi.encode()})
        fq = pi.field
        residue = fq if pi.degree == 1 else extension_field(fq, pi.degree)
        root = roots_of_irreducible(pi.with_var(Var.X), residue, rng or random.Random(0))[0]
        return cls(pi, residue, root)

    @property
    def degree(self) -> int:
        return self.pi.degree

    @property
    def residue_cardinality(self) -> int:
        return self.residue_field.cardinality

    def encode(self) -> List[Any]:
        return self.pi.encode()

    def sort_key(self) -> Tuple:
        return self.pi.sort_key()

    def __str__(self) -> str:
        return f"({self.pi})"


def place_rng(seed: int, pi: Poly) -> random.Random:
    """Generator for the place (pi), independent of sweep order and worker assignment."""
    return random.Random(f"{seed}:{pi.encode()}")


def places_up_to(fq: Field, bound: int, seed: int = 0) -> List[Place]:
    """All finite places of degree ≤ bound in (degree, lexicographic) order."""
    return [Place.from_poly(pi, place_rng(seed, pi)) for pi in irreducibles_up_to(fq, bound, Var.THETA)]


def reduce(x: RatFunc, v: Place) -> Element:
    """Image of x in the residue field at v."""
    if v.pi.divides(x.den):
        raise BadReductionError(f"bad reduction at place {v}: pole", place=v.encode())
    k = v.residue_field
    num = x.num.evaluate_in(k, v.root)
    den = x.den.evaluate_in(k, v.root)
    return k.div(num, den)


def valuation(x: RatFunc, v: Place) -> int:
    if x.is_zero():
        raise DomainError("valuation of zero")
    count = 0
    num, den = x.num, x.den
    while v.pi.divides(num):
        num = num // v.pi
        count += 1
    while v.pi.divides(den):
        den = den // v.pi
        count -= 1
    return count


def monic_divisors(f: Poly) -> List[Poly]:
    """All monic divisors of a nonzero polynomial, sorted."""
    divisors = [Poly.one(f.field, f.var)]
    for g, e in factor(f):
        powers = [g**i for i in range(e + 1)]
        divisors = [d * p for d in divisors for p in powers]
    return sorted(divisors, key=Poly.sort_key)


def integral_form(P: Poly) -> List[Poly]:
    """Coefficients of lcm(denominators)·P, as polynomials in θ."""
    K = P.field
    if not isinstance(K, RationalFunctionField):
        raise DomainError("rational roots need coefficients in F_q(θ)")
    lcm = Poly.one(K.fq, Var.THETA)
    for c in P.coeffs:
        lcm = (lcm * c.den) // lcm.gcd(c.den)
    return [(c.num * (lcm // c.den)) for c in P.coeffs]


def rational_roots(P: Poly) -> List[RatFunc]:
    """
    The distinct roots in F_q(θ) of a nonzero polynomial in x over F_q(θ).

    Denominators are cleared first; a zero constant term contributes the root
    0 and the factor x is stripped. Remaining candidates are u·n/d with n a
    monic divisor of the constant term, d a monic divisor of the leading
    term and u ∈ F_q^×. Roots are returned sorted.
    """
    if P.is_zero():
        raise DomainError("rational roots of the zero polynomial")
    K: RationalFunctionField = P.field  # type: ignore[assignment]
    Q = integral_form(P)
    roots: List[RatFunc] = []
    if Q[0].is_zero():
        roots.append(K.zero)
        while Q and Q[0].is_zero():
            Q = Q[1:]
    degree = len(Q) - 1
    if degree < 1:
        return roots

    fq = K.fq
    units = [c for c in fq.elements() if c != fq.zero]
    for n in monic_divisors(Q[0]):
        for d in monic_divisors(Q[-1]):
            if not n.gcd(d).is_one():
                continue
            n_powers = [Poly.one(fq, Var.THETA)]
            d_powers = [Poly.one(fq, Var.THETA)]
            for _ in range(degree):
                n_powers.append(n_powers[-1] * n)
                d_powers.append(d_powers[-1] * d)
            terms = [Q[i] * n_powers[i] * d_powers[degree - i] for i in range(degree + 1)]
            for u in units:
                total = Poly.zero(fq, Var.THETA)
                u_power = fq.one
                for term in terms:
                    total = total + term.scale(u_power)
                    u_power = fq.mul(u_power, u)
                if total.is_zero():
                    roots.append(RatFunc.make(n.scale(u), d))

    for x in roots:
        if not P(x).is_zero():
            raise AssertionError(f"rational root {x} does not substitute to zero")
    return sorted(set(roots), key=RatFunc.sort_key)
