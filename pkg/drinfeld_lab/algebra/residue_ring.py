"""
Residue Rings A/(a)

The finite ring F_q[t]/(a) for a monic a of positive degree. Elements are
tuples of deg a coefficients (ascending in t) over F_q, so they hash, sort
and serialize without reference to the ring object.
"""

from functools import cached_property
from itertools import product
from math import prod
from typing import Any, Iterator, List, Sequence, Tuple

from drinfeld_lab.algebra.fields import Element, Field
from drinfeld_lab.algebra.poly import Poly, Var
from drinfeld_lab.core.exceptions import DomainError

RingElement = Tuple[Element, ...]


class ResidueRing:
    """A/(a) with a monic of degree d ≥ 1."""

    def __init__(self, modulus: Poly):
        if modulus.degree < 1:
            raise DomainError("residue ring needs a level of positive degree", {"level": str(modulus)})
        self.modulus = modulus.monic().with_var(Var.T)
        self.field: Field = modulus.field
        self.degree = self.modulus.degree

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ResidueRing) and self.modulus == other.modulus

    def __hash__(self) -> int:
        return hash(self.modulus)

    def __repr__(self) -> str:
        return f"ResidueRing({self.modulus})"

    # conversion

    def reduce(self, f: Poly) -> RingElement:
        r = f.with_var(Var.T) % self.modulus
        return tuple(r[i] for i in range(self.degree))

    def lift(self, x: RingElement) -> Poly:
        return Poly(self.field, x, Var.T)

    def from_constant(self, c: Element) -> RingElement:
        return (c,) + (self.field.zero,) * (self.degree - 1)

    @cached_property
    def zero(self) -> RingElement:
        return (self.field.zero,) * self.degree

    @cached_property
    def one(self) -> RingElement:
        return self.from_constant(self.field.one)

    @cached_property
    def t(self) -> RingElement:
        return self.reduce(Poly.gen(self.field, Var.T))

    # arithmetic

    def add(self, x: RingElement, y: RingElement) -> RingElement:
        F = self.field
        return tuple(F.add(a, b) for a, b in zip(x, y))

    def sub(self, x: RingElement, y: RingElement) -> RingElement:
        F = self.field
        return tuple(F.sub(a, b) for a, b in zip(x, y))

    def neg(self, x: RingElement) -> RingElement:
        F = self.field
        return tuple(F.neg(a) for a in x)

    def mul(self, x: RingElement, y: RingElement) -> RingElement:
        return self.reduce(self.lift(x) * self.lift(y))

    def scale(self, c: Element, x: RingElement) -> RingElement:
        F = self.field
        return tuple(F.mul(c, a) for a in x)

    def pow(self, x: RingElement, e: int) -> RingElement:
        if e < 0:
            return self.pow(self.inv(x), -e)
        return self.reduce(self.lift(x).powmod(e, self.modulus))

    def is_unit(self, x: RingElement) -> bool:
        return self.lift(x).gcd(self.modulus).is_one()

    def inv(self, x: RingElement) -> RingElement:
        g, s, _ = self.lift(x).xgcd(self.modulus)
        if not g.is_one():
            raise DomainError("element is not a unit", {"element": self.encode(x), "level": str(self.modulus)})
        return self.reduce(s)

    def is_zero(self, x: RingElement) -> bool:
        return x == self.zero

    # enumeration

    @cached_property
    def cardinality(self) -> int:
        return self.field.cardinality**self.degree

    @cached_property
    def prime_factors(self) -> List[Tuple[Poly, int]]:
        from drinfeld_lab.algebra.factor import factor

        return factor(self.modulus)

    @cached_property
    def unit_count(self) -> int:
        """|(A/(a))^×| = Π (Q^{deg p} - 1)·Q^{deg p·(e-1)}."""
        Q = self.field.cardinality
        return prod((Q ** p.degree - 1) * Q ** (p.degree * (e - 1)) for p, e in self.prime_factors)

    def sort_key(self, x: RingElement) -> Tuple[int, ...]:
        F = self.field
        return tuple(F.sort_key(c) for c in reversed(x))

    def elements(self) -> Iterator[RingElement]:
        """All elements, increasing in sort_key."""
        values = list(self.field.elements())
        for top_down in product(values, repeat=self.degree):
            yield tuple(reversed(top_down))

    def units(self) -> List[RingElement]:
        return [x for x in self.elements() if self.is_unit(x)]

    def index(self, x: RingElement) -> int:
        Q = self.field.cardinality
        value = 0
        for c in reversed(x):
            value = value * Q + self.field.sort_key(c)
        return value

    def encode(self, x: RingElement) -> List[Any]:
        return [self.field.encode(c) for c in x]

    def decode(self, data: Sequence[Any]) -> RingElement:
        coeffs = [self.field.decode(c) for c in data]
        return self.reduce(Poly(self.field, coeffs, Var.T))

    def format(self, x: RingElement) -> str:
        return str(self.lift(x))
