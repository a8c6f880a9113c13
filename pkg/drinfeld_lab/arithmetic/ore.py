"""
Ore Polynomials

The twisted polynomial ring L{τ} with τ·c = c^q·τ, where q is the size of
the constant field of L. Elements act on any extension of L as the additive
polynomials Σ c_i x^{q^i}.
"""

from typing import Any, Callable, Iterable, List, Optional, Tuple

from drinfeld_lab.algebra.fields import Element, Field
from drinfeld_lab.core.exceptions import DomainError


class OrePoly:
    """Σ c_i τ^i with ascending coefficients and no trailing zeros."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Iterable[Element] = ()):
        cs = list(coeffs)
        zero = field.zero
        while cs and cs[-1] == zero:
            cs.pop()
        self.field = field
        self.coeffs: Tuple[Element, ...] = tuple(cs)

    @classmethod
    def zero(cls, field: Field) -> "OrePoly":
        return cls(field)

    @classmethod
    def one(cls, field: Field) -> "OrePoly":
        return cls(field, (field.one,))

    @classmethod
    def constant(cls, field: Field, c: Element) -> "OrePoly":
        return cls(field, (c,))

    @classmethod
    def tau(cls, field: Field, power: int = 1) -> "OrePoly":
        return cls(field, (field.zero,) * power + (field.one,))

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Element:
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def __getitem__(self, i: int) -> Element:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero

    def is_zero(self) -> bool:
        return not self.coeffs

    def constant_term(self) -> Element:
        return self[0]

    def _check(self, other: "OrePoly") -> None:
        if other.field != self.field:
            raise DomainError("mixed coefficient fields", {"left": str(self.field), "right": str(other.field)})

    def __add__(self, other: "OrePoly") -> "OrePoly":
        self._check(other)
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return OrePoly(F, (F.add(self[i], other[i]) for i in range(n)))

    def __neg__(self) -> "OrePoly":
        return OrePoly(self.field, (self.field.neg(c) for c in self.coeffs))

    def __sub__(self, other: "OrePoly") -> "OrePoly":
        return self + (-other)

    def __mul__(self, other: "OrePoly") -> "OrePoly":
        """(Σ a_i τ^i)(Σ b_j τ^j) = Σ a_i b_j^{q^i} τ^{i+j}."""
        self._check(other)
        F = self.field
        if self.is_zero() or other.is_zero():
            return OrePoly(F)
        zero = F.zero
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        twisted = list(other.coeffs)
        for i, a in enumerate(self.coeffs):
            if i > 0:
                twisted = [F.frob(b) for b in twisted]
            if a == zero:
                continue
            for j, b in enumerate(twisted):
                if b != zero:
                    out[i + j] = F.add(out[i + j], F.mul(a, b))
        return OrePoly(F, out)

    def scale_left(self, c: Element) -> "OrePoly":
        F = self.field
        return OrePoly(F, (F.mul(c, x) for x in self.coeffs))

    def scale_right(self, c: Element) -> "OrePoly":
        """self·c = Σ a_i c^{q^i} τ^i."""
        F = self.field
        out = []
        power = c
        for i, x in enumerate(self.coeffs):
            if i > 0:
                power = F.frob(power)
            out.append(F.mul(x, power))
        return OrePoly(F, out)

    def __pow__(self, e: int) -> "OrePoly":
        result = OrePoly.one(self.field)
        for _ in range(e):
            result = result * self
        return result

    def right_divide(self, g: "OrePoly") -> Tuple["OrePoly", "OrePoly"]:
        """(quotient, remainder) with self = quotient·g + remainder, deg remainder < deg g."""
        self._check(g)
        if g.is_zero():
            raise DomainError("right division by the zero Ore polynomial")
        F = self.field
        n = g.degree
        remainder = self
        quotient_coeffs = [F.zero] * max(self.degree - n + 1, 0)
        while not remainder.is_zero() and remainder.degree >= n:
            shift = remainder.degree - n
            c = F.div(remainder.leading, F.frob(g.leading, shift))
            quotient_coeffs[shift] = c
            term = OrePoly(F, (F.zero,) * shift + (c,))
            remainder = remainder - term * g
        return OrePoly(F, quotient_coeffs), remainder

    def evaluate(
        self, x: Element, target: Optional[Field] = None, embed: Optional[Callable[[Element], Element]] = None
    ) -> Element:
        """Σ c_i x^{q^i} with x in `target` (defaults to the coefficient field)."""
        target = target or self.field
        embed = embed or (lambda c: c)
        acc = target.zero
        power = x
        for i, c in enumerate(self.coeffs):
            if i > 0:
                power = target.frob(power)
            if c != self.field.zero:
                acc = target.add(acc, target.mul(embed(c), power))
        return acc

    def map_coefficients(self, func: Callable[[Element], Element], field: Field) -> "OrePoly":
        return OrePoly(field, (func(c) for c in self.coeffs))

    def valuation(self) -> int:
        """Least i with c_i ≠ 0."""
        for i, c in enumerate(self.coeffs):
            if c != self.field.zero:
                return i
        raise DomainError("valuation of the zero Ore polynomial")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OrePoly):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def encode(self) -> dict:
        return {"q": self.q, "coeffs": [self.field.encode(c) for c in self.coeffs]}

    @classmethod
    def decode(cls, field: Field, data: Any) -> "OrePoly":
        coeffs = data["coeffs"] if isinstance(data, dict) else data
        return cls(field, (field.decode(c) for c in coeffs))

    def __repr__(self) -> str:
        return f"OrePoly({self})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms: List[str] = []
        for i, c in enumerate(self.coeffs):
            if c == self.field.zero:
                continue
            label = str(c) if not isinstance(c, tuple) else str(self.field.encode(c))
            if i == 0:
                terms.append(label)
            else:
                mono = "τ" if i == 1 else f"τ^{i}"
                terms.append(mono if c == self.field.one else f"({label})*{mono}")
        return " + ".join(terms)


def mul(f: OrePoly, g: OrePoly) -> OrePoly:
    return f * g


def evaluate(f: OrePoly, x: Element, target: Optional[Field] = None, embed=None) -> Element:
    return f.evaluate(x, target, embed)


def constant_term(f: OrePoly) -> Element:
    return f.constant_term()


def right_divide(f: OrePoly, g: OrePoly) -> Tuple[OrePoly, OrePoly]:
    return f.right_divide(g)
