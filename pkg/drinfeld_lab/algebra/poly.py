"""
Univariate Polynomials

Dense polynomials over any Field. The variable tag records the role a
polynomial plays: θ for the function-field variable, t for elements of
A = F_q[t], u for a subring F_q[u] ⊂ A, x for root finding.
"""

from enum import Enum
from typing import Any, Callable, Iterable, List, Optional, Sequence, Tuple, Union

from drinfeld_lab.algebra.fields import Element, Field, PrimeField
from drinfeld_lab.core.exceptions import DomainError


class Var(str, Enum):
    """Indeterminate role tag"""
    THETA = "theta"
    T = "t"
    U = "u"
    X = "x"


_SYMBOLS = {Var.THETA: "θ", Var.T: "t", Var.U: "u", Var.X: "x"}


class Poly:
    """Immutable polynomial with ascending coefficients and no trailing zeros."""

    __slots__ = ("field", "coeffs", "var")

    def __init__(self, field: Field, coeffs: Iterable[Element] = (), var: Union[Var, str] = Var.X):
        cs = list(coeffs)
        zero = field.zero
        while cs and cs[-1] == zero:
            cs.pop()
        self.field = field
        self.coeffs: Tuple[Element, ...] = tuple(cs)
        self.var = Var(var)

    # construction

    @classmethod
    def zero(cls, field: Field, var: Union[Var, str] = Var.X) -> "Poly":
        return cls(field, (), var)

    @classmethod
    def one(cls, field: Field, var: Union[Var, str] = Var.X) -> "Poly":
        return cls(field, (field.one,), var)

    @classmethod
    def constant(cls, field: Field, c: Element, var: Union[Var, str] = Var.X) -> "Poly":
        return cls(field, (c,), var)

    @classmethod
    def gen(cls, field: Field, var: Union[Var, str] = Var.X) -> "Poly":
        return cls(field, (field.zero, field.one), var)

    @classmethod
    def monomial(
        cls, field: Field, degree: int, c: Optional[Element] = None, var: Union[Var, str] = Var.X
    ) -> "Poly":
        coeff = field.one if c is None else c
        return cls(field, (field.zero,) * degree + (coeff,), var)

    @classmethod
    def from_ints(cls, field: Field, values: Sequence[int], var: Union[Var, str] = Var.X) -> "Poly":
        return cls(field, (field.from_int(v) for v in values), var)

    @classmethod
    def decode(cls, field: Field, data: Sequence[Any], var: Union[Var, str] = Var.X) -> "Poly":
        return cls(field, (field.decode(c) for c in data), var)

    def encode(self) -> List[Any]:
        return [self.field.encode(c) for c in self.coeffs]

    # basic properties

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Element:
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (self.field.one,)

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one

    def __getitem__(self, i: int) -> Element:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero

    def __len__(self) -> int:
        return len(self.coeffs)

    def _like(self, coeffs: Iterable[Element]) -> "Poly":
        return Poly(self.field, coeffs, self.var)

    def _coerce(self, other: Any) -> "Poly":
        if isinstance(other, Poly):
            if other.field != self.field:
                raise DomainError(
                    "mixed coefficient fields", {"left": str(self.field), "right": str(other.field)}
                )
            return other
        if isinstance(other, int) and not isinstance(self.field, PrimeField):
            return self._like((self.field.from_int(other),))
        return self._like((other,))

    # arithmetic

    def __add__(self, other: Any) -> "Poly":
        o = self._coerce(other)
        F = self.field
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return self._like(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        F = self.field
        return self._like(F.neg(c) for c in self.coeffs)

    def __sub__(self, other: Any) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "Poly":
        o = self._coerce(other)
        if not self.coeffs or not o.coeffs:
            return self._like(())
        F = self.field
        if isinstance(F, PrimeField):
            p = F.p
            out_int = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
            for i, x in enumerate(self.coeffs):
                if x:
                    for j, y in enumerate(o.coeffs):
                        if y:
                            out_int[i + j] += x * y
            return self._like(v % p for v in out_int)
        zero = F.zero
        out = [zero] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x != zero:
                for j, y in enumerate(o.coeffs):
                    if y != zero:
                        out[i + j] = F.add(out[i + j], F.mul(x, y))
        return self._like(out)

    __rmul__ = __mul__

    def scale(self, c: Element) -> "Poly":
        F = self.field
        return self._like(F.mul(c, x) for x in self.coeffs)

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise DomainError("negative polynomial power")
        result = Poly.one(self.field, self.var)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other: Any) -> Tuple["Poly", "Poly"]:
        o = self._coerce(other)
        if o.is_zero():
            raise DomainError("division by the zero polynomial")
        F = self.field
        dg = o.degree
        dq = self.degree - dg
        if dq < 0:
            return self._like(()), self
        divisor = o.coeffs
        if isinstance(F, PrimeField):
            p = F.p
            rem_int = list(self.coeffs)
            lead_inv = F.inv(divisor[-1])
            quot_int = [0] * (dq + 1)
            for k in range(dq, -1, -1):
                c = (rem_int[k + dg] * lead_inv) % p
                quot_int[k] = c
                if c:
                    for j in range(dg + 1):
                        rem_int[k + j] = (rem_int[k + j] - c * divisor[j]) % p
            return self._like(quot_int), self._like(rem_int[:dg])
        remainder = list(self.coeffs)
        lead = F.inv(divisor[-1])
        quotient = [F.zero] * (dq + 1)
        for k in range(dq, -1, -1):
            c = F.mul(remainder[k + dg], lead)
            quotient[k] = c
            if c != F.zero:
                for j in range(dg + 1):
                    remainder[k + j] = F.sub(remainder[k + j], F.mul(c, divisor[j]))
        return self._like(quotient), self._like(remainder[:dg])

    def __floordiv__(self, other: Any) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: Any) -> "Poly":
        return divmod(self, other)[1]

    def divides(self, other: "Poly") -> bool:
        return (other % self).is_zero()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.var == other.var and self.coeffs == other.coeffs and self.field == other.field

    def __hash__(self) -> int:
        return hash((self.var.value, self.coeffs))

    def __call__(self, x: Element) -> Element:
        """Evaluate at an element of the coefficient field."""
        F = self.field
        acc = F.zero
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def evaluate_in(self, target: Field, x: Element, embed: Optional[Callable[[Element], Element]] = None) -> Element:
        """Horner evaluation at x in a field the coefficients embed into."""
        embed = embed or target.from_constant
        acc = target.zero
        for c in reversed(self.coeffs):
            acc = target.add(target.mul(acc, x), embed(c))
        return acc

    def compose(self, inner: "Poly") -> "Poly":
        acc = inner._like(())
        for c in reversed(self.coeffs):
            acc = acc * inner + inner._like((c,))
        return acc

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.leading))

    def derivative(self) -> "Poly":
        F = self.field
        return self._like(F.mul(F.from_int(i), c) for i, c in enumerate(self.coeffs) if i > 0)

    def with_var(self, var: Union[Var, str]) -> "Poly":
        return Poly(self.field, self.coeffs, var)

    def map_coefficients(self, func: Callable[[Element], Element], field: Field) -> "Poly":
        return Poly(field, (func(c) for c in self.coeffs), self.var)

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, self._coerce(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def xgcd(self, other: "Poly") -> Tuple["Poly", "Poly", "Poly"]:
        """(g, s, t) with g = s·self + t·other and g monic."""
        o = self._coerce(other)
        r0, r1 = self, o
        s0, s1 = Poly.one(self.field, self.var), self._like(())
        t0, t1 = self._like(()), Poly.one(self.field, self.var)
        while not r1.is_zero():
            quotient, remainder = divmod(r0, r1)
            r0, r1 = r1, remainder
            s0, s1 = s1, s0 - quotient * s1
            t0, t1 = t1, t0 - quotient * t1
        if r0.is_zero():
            return r0, s0, t0
        inv = self.field.inv(r0.leading)
        return r0.scale(inv), s0.scale(inv), t0.scale(inv)

    def powmod(self, e: int, modulus: "Poly") -> "Poly":
        result = Poly.one(self.field, self.var) % modulus
        base = self % modulus
        while e:
            if e & 1:
                result = (result * base) % modulus
            e >>= 1
            if e:
                base = (base * base) % modulus
        return result

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        """(degree, coefficients from the top): the (degree, lexicographic) order."""
        F = self.field
        return (self.degree, tuple(F.sort_key(c) for c in reversed(self.coeffs)))

    def __lt__(self, other: "Poly") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        symbol = _SYMBOLS[self.var]
        F = self.field
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == F.zero:
                continue
            label = _format_coefficient(F, c)
            if i == 0:
                terms.append(label)
            else:
                mono = symbol if i == 1 else f"{symbol}^{i}"
                terms.append(mono if c == F.one else f"{label}*{mono}")
        return " + ".join(terms)


def _format_coefficient(F: Field, c: Element) -> str:
    encoded = F.encode(c)
    if isinstance(encoded, list):
        return "[" + ",".join(str(v) for v in encoded) + "]"
    return str(encoded)
