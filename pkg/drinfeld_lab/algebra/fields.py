"""
Finite Fields

Prime fields F_p and extensions built by an explicit monic modulus over a base
field. Every field knows its designated constant field F_q; the q-power
Frobenius is what twists Ore polynomials, so it is computed by a precomputed
linear map rather than by exponentiation.
"""

import logging
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Any, Iterator, List, Optional, Sequence, Tuple

from sympy import factorint, isprime

from drinfeld_lab.core.exceptions import DomainError

logger = logging.getLogger(__name__)

Element = Any


class Field(ABC):
    """
    Interface shared by every coefficient field.

    Elements are immutable, hashable Python values (ints for prime fields,
    tuples for extensions). All arithmetic goes through the field object.
    """

    @property
    @abstractmethod
    def characteristic(self) -> int:
        """Characteristic p."""

    @property
    @abstractmethod
    def q(self) -> int:
        """Cardinality of the designated constant field F_q."""

    @property
    @abstractmethod
    def cardinality(self) -> Optional[int]:
        """Number of elements, None for infinite fields."""

    @property
    @abstractmethod
    def zero(self) -> Element:
        ...

    @property
    @abstractmethod
    def one(self) -> Element:
        ...

    @abstractmethod
    def add(self, a: Element, b: Element) -> Element:
        ...

    @abstractmethod
    def neg(self, a: Element) -> Element:
        ...

    @abstractmethod
    def mul(self, a: Element, b: Element) -> Element:
        ...

    @abstractmethod
    def inv(self, a: Element) -> Element:
        ...

    @abstractmethod
    def from_int(self, n: int) -> Element:
        ...

    @abstractmethod
    def from_constant(self, c: Element) -> Element:
        """Embed an element of F_q."""

    @abstractmethod
    def is_constant(self, a: Element) -> bool:
        """True when a lies in the embedded F_q."""

    @abstractmethod
    def encode(self, a: Element) -> Any:
        ...

    @abstractmethod
    def decode(self, data: Any) -> Element:
        ...

    def sub(self, a: Element, b: Element) -> Element:
        return self.add(a, self.neg(b))

    def div(self, a: Element, b: Element) -> Element:
        return self.mul(a, self.inv(b))

    def is_zero(self, a: Element) -> bool:
        return a == self.zero

    def pow(self, a: Element, e: int) -> Element:
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def frob(self, a: Element, k: int = 1) -> Element:
        """a^(q^k). Negative k inverts the Frobenius on finite fields."""
        if k < 0:
            raise DomainError("inverse Frobenius needs a finite field")
        for _ in range(k):
            a = self.pow(a, self.q)
        return a

    def scalar_mul(self, c: Element, a: Element) -> Element:
        """Multiply a by the F_q-scalar c."""
        return self.mul(self.from_constant(c), a)


@dataclass(frozen=True)
class PrimeField(Field):
    """The prime field F_p; elements are ints in [0, p)."""

    p: int

    def __post_init__(self) -> None:
        if not isprime(self.p):
            raise DomainError(f"{self.p} is not prime", {"p": self.p})

    def __str__(self) -> str:
        return f"F_{self.p}"

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def q(self) -> int:
        return self.p

    @property
    def cardinality(self) -> int:
        return self.p

    @property
    def degree(self) -> int:
        return 1

    @property
    def prime_degree(self) -> int:
        return 1

    @property
    def fq_dimension(self) -> int:
        return 1

    @property
    def constant_field(self) -> "PrimeField":
        return self

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise DomainError("division by zero", {"field": str(self)})
        return pow(a, self.p - 2, self.p)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def frob(self, a: int, k: int = 1) -> int:
        return a

    def pth_root(self, a: int) -> int:
        return a

    def from_int(self, n: int) -> int:
        return n % self.p

    def from_constant(self, c: int) -> int:
        return c

    def to_constant(self, a: int) -> int:
        return a

    def is_constant(self, a: int) -> bool:
        return True

    def fq_coordinates(self, a: int) -> Tuple[int, ...]:
        return (a,)

    def from_fq_coordinates(self, coords: Sequence[int]) -> int:
        return coords[0]

    def prime_coordinates(self, a: int) -> Tuple[int, ...]:
        return (a,)

    def from_prime_coordinates(self, coords: Sequence[int]) -> int:
        return coords[0] % self.p if coords else 0

    def sort_key(self, a: int) -> int:
        return a

    def element(self, index: int) -> int:
        return index % self.p

    def elements(self) -> Iterator[int]:
        return iter(range(self.p))

    def random_element(self, rng: random.Random) -> int:
        return rng.randrange(self.p)

    def encode(self, a: int) -> int:
        return int(a)

    def decode(self, data: Any) -> int:
        if isinstance(data, (list, tuple)):
            return self.from_prime_coordinates(list(_flatten(data)))
        return int(data) % self.p


@dataclass(frozen=True)
class FiniteField(Field):
    """
    Extension base[x]/(modulus).

    Elements are tuples of base elements of length n = deg(modulus), ascending.
    `constant_cardinality` overrides q when this field itself plays F_q
    (for example F_4 built over F_2).
    """

    base: Field
    modulus: Tuple[Element, ...]
    constant_cardinality: Optional[int] = None
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.modulus) < 2:
            raise DomainError("modulus must have degree at least 1")
        if self.modulus[-1] != self.base.one:
            raise DomainError("modulus must be monic", {"modulus": repr(self.modulus)})
        if self.check:
            from drinfeld_lab.algebra.factor import is_irreducible
            from drinfeld_lab.algebra.poly import Poly

            if not is_irreducible(Poly(self.base, self.modulus)):
                raise DomainError("modulus is not irreducible", {"modulus": repr(self.modulus)})

    def __str__(self) -> str:
        return f"F_{self.cardinality}"

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    @property
    def characteristic(self) -> int:
        return self.base.characteristic

    @property
    def q(self) -> int:
        return self.constant_cardinality or self.base.q

    @cached_property
    def cardinality(self) -> int:
        return self.base.cardinality ** self.degree

    @cached_property
    def prime_degree(self) -> int:
        return self.degree * self.base.prime_degree

    @cached_property
    def fq_dimension(self) -> int:
        """Dimension over the constant field F_q."""
        if self.cardinality == self.q:
            return 1
        return self.degree * self.base.fq_dimension

    @property
    def constant_field(self) -> Field:
        if self.cardinality == self.q:
            return self
        return self.base.constant_field

    @cached_property
    def _prime(self) -> Optional[int]:
        return self.base.p if isinstance(self.base, PrimeField) else None

    @cached_property
    def zero(self) -> Tuple[Element, ...]:
        return (self.base.zero,) * self.degree

    @cached_property
    def one(self) -> Tuple[Element, ...]:
        return (self.base.one,) + (self.base.zero,) * (self.degree - 1)

    @cached_property
    def generator(self) -> Tuple[Element, ...]:
        """The class of x."""
        if self.degree == 1:
            return (self.base.neg(self.modulus[0]),)
        return (self.base.zero, self.base.one) + (self.base.zero,) * (self.degree - 2)

    @cached_property
    def _neg_low(self) -> Tuple[Element, ...]:
        return tuple(self.base.neg(c) for c in self.modulus[:-1])

    def add(self, a: Tuple, b: Tuple) -> Tuple:
        p = self._prime
        if p is not None:
            return tuple((x + y) % p for x, y in zip(a, b))
        B = self.base
        return tuple(B.add(x, y) for x, y in zip(a, b))

    def sub(self, a: Tuple, b: Tuple) -> Tuple:
        p = self._prime
        if p is not None:
            return tuple((x - y) % p for x, y in zip(a, b))
        B = self.base
        return tuple(B.sub(x, y) for x, y in zip(a, b))

    def neg(self, a: Tuple) -> Tuple:
        p = self._prime
        if p is not None:
            return tuple((-x) % p for x in a)
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a: Tuple, b: Tuple) -> Tuple:
        n = self.degree
        p = self._prime
        if p is not None:
            prod = [0] * (2 * n - 1)
            for i, ai in enumerate(a):
                if ai:
                    for j, bj in enumerate(b):
                        if bj:
                            prod[i + j] += ai * bj
            low = self._neg_low
            for k in range(2 * n - 2, n - 1, -1):
                c = prod[k] % p
                if c:
                    shift = k - n
                    for j, mj in enumerate(low):
                        if mj:
                            prod[shift + j] += c * mj
            return tuple(v % p for v in prod[:n])

        B = self.base
        zero = B.zero
        gprod = [zero] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai != zero:
                for j, bj in enumerate(b):
                    if bj != zero:
                        gprod[i + j] = B.add(gprod[i + j], B.mul(ai, bj))
        for k in range(2 * n - 2, n - 1, -1):
            c = gprod[k]
            if c != zero:
                shift = k - n
                for j, mj in enumerate(self._neg_low):
                    if mj != zero:
                        gprod[shift + j] = B.add(gprod[shift + j], B.mul(c, mj))
        return tuple(gprod[:n])

    def scalar_mul(self, c: Element, a: Tuple) -> Tuple:
        if self.cardinality == self.q:
            return self.mul(c, a)
        p = self._prime
        if p is not None and self.base.cardinality == self.q:
            return tuple((c * x) % p for x in a)
        B = self.base
        return tuple(B.scalar_mul(c, x) for x in a)

    def inv(self, a: Tuple) -> Tuple:
        if self.is_zero(a):
            raise DomainError("division by zero", {"field": str(self)})
        B = self.base
        r0, r1 = list(self.modulus), _trim(B, list(a))
        s0: List[Element] = []
        s1: List[Element] = [B.one]
        while len(r1) > 1:
            quotient, remainder = _coeff_divmod(B, r0, r1)
            r0, r1 = r1, remainder
            s0, s1 = s1, _coeff_sub(B, s0, _coeff_mul(B, quotient, s1))
        c = B.inv(r1[0])
        result = [B.mul(c, x) for x in s1]
        result += [B.zero] * (self.degree - len(result))
        return tuple(result[: self.degree])

    @cached_property
    def _frobenius_columns(self) -> Tuple[Tuple, ...]:
        """Images of x^j under the q-power map."""
        xq = Field.pow(self, self.generator, self.q)
        columns = [self.one]
        for _ in range(1, self.degree):
            columns.append(self.mul(columns[-1], xq))
        return tuple(columns)

    def _frob_once(self, a: Tuple) -> Tuple:
        n = self.degree
        columns = self._frobenius_columns
        p = self._prime
        if p is not None:
            out = [0] * n
            for j, aj in enumerate(a):
                if aj:
                    for i, c in enumerate(columns[j]):
                        if c:
                            out[i] += aj * c
            return tuple(v % p for v in out)
        B = self.base
        acc = self.zero
        for j, aj in enumerate(a):
            if aj != B.zero:
                image = B.frob(aj)
                acc = self.add(acc, tuple(B.mul(image, c) for c in columns[j]))
        return acc

    def frob(self, a: Tuple, k: int = 1) -> Tuple:
        if self.cardinality == self.q:
            return a
        k %= self.fq_dimension
        for _ in range(k):
            a = self._frob_once(a)
        return a

    def pth_root(self, a: Tuple) -> Tuple:
        return self.pow(a, self.cardinality // self.characteristic)

    def from_int(self, n: int) -> Tuple:
        return (self.base.from_int(n),) + (self.base.zero,) * (self.degree - 1)

    def from_constant(self, c: Element) -> Tuple:
        if self.cardinality == self.q:
            return c
        return (self.base.from_constant(c),) + (self.base.zero,) * (self.degree - 1)

    def to_constant(self, a: Tuple) -> Element:
        if self.cardinality == self.q:
            return a
        if any(x != self.base.zero for x in a[1:]):
            raise DomainError("element is not in the constant field")
        return self.base.to_constant(a[0])

    def is_constant(self, a: Tuple) -> bool:
        if self.cardinality == self.q:
            return True
        return all(x == self.base.zero for x in a[1:]) and self.base.is_constant(a[0])

    def fq_coordinates(self, a: Tuple) -> Tuple[Element, ...]:
        if self.cardinality == self.q:
            return (a,)
        out: List[Element] = []
        for c in a:
            out.extend(self.base.fq_coordinates(c))
        return tuple(out)

    def from_fq_coordinates(self, coords: Sequence[Element]) -> Tuple:
        if self.cardinality == self.q:
            return coords[0]
        step = self.base.fq_dimension
        return tuple(
            self.base.from_fq_coordinates(coords[i * step : (i + 1) * step]) for i in range(self.degree)
        )

    def prime_coordinates(self, a: Tuple) -> Tuple[int, ...]:
        out: List[int] = []
        for c in a:
            out.extend(self.base.prime_coordinates(c))
        return tuple(out)

    def from_prime_coordinates(self, coords: Sequence[int]) -> Tuple:
        coords = list(coords) + [0] * (self.prime_degree - len(coords))
        step = self.base.prime_degree
        return tuple(
            self.base.from_prime_coordinates(coords[i * step : (i + 1) * step]) for i in range(self.degree)
        )

    def sort_key(self, a: Tuple) -> int:
        p = self.characteristic
        key = 0
        for digit in reversed(self.prime_coordinates(a)):
            key = key * p + digit
        return key

    def element(self, index: int) -> Tuple:
        p = self.characteristic
        digits = []
        for _ in range(self.prime_degree):
            index, digit = divmod(index, p)
            digits.append(digit)
        return self.from_prime_coordinates(digits)

    def elements(self) -> Iterator[Tuple]:
        return (self.element(i) for i in range(self.cardinality))

    def random_element(self, rng: random.Random) -> Tuple:
        return self.element(rng.randrange(self.cardinality))

    def encode(self, a: Tuple) -> List[int]:
        return [int(x) for x in self.prime_coordinates(a)]

    def decode(self, data: Any) -> Tuple:
        if isinstance(data, int):
            return self.from_int(data)
        return self.from_prime_coordinates(list(_flatten(data)))


def _flatten(data: Any) -> Iterator[int]:
    if isinstance(data, (list, tuple)):
        for item in data:
            yield from _flatten(item)
    else:
        yield int(data)


def _trim(B: Field, coeffs: List[Element]) -> List[Element]:
    while coeffs and coeffs[-1] == B.zero:
        coeffs.pop()
    return coeffs


def _coeff_sub(B: Field, a: List[Element], b: List[Element]) -> List[Element]:
    n = max(len(a), len(b))
    out = [
        B.sub(a[i] if i < len(a) else B.zero, b[i] if i < len(b) else B.zero) for i in range(n)
    ]
    return _trim(B, out)


def _coeff_mul(B: Field, a: List[Element], b: List[Element]) -> List[Element]:
    if not a or not b:
        return []
    out = [B.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x != B.zero:
            for j, y in enumerate(b):
                out[i + j] = B.add(out[i + j], B.mul(x, y))
    return _trim(B, out)


def _coeff_divmod(B: Field, a: List[Element], b: List[Element]) -> Tuple[List[Element], List[Element]]:
    remainder = list(a)
    db = len(b) - 1
    if len(remainder) - 1 < db:
        return [], _trim(B, remainder)
    lead_inv = B.inv(b[-1])
    quotient = [B.zero] * (len(remainder) - db)
    for k in range(len(remainder) - 1 - db, -1, -1):
        c = B.mul(remainder[k + db], lead_inv)
        quotient[k] = c
        if c != B.zero:
            for j in range(db + 1):
                remainder[k + j] = B.sub(remainder[k + j], B.mul(c, b[j]))
    return _trim(B, quotient), _trim(B, remainder[:db])


@lru_cache(maxsize=None)
def constant_field(q: int) -> Field:
    """F_q: the prime field, or F_p[x]/(least irreducible of degree e)."""
    factors = factorint(q)
    if len(factors) != 1:
        raise DomainError(f"q = {q} is not a prime power", {"q": q})
    ((p, e),) = factors.items()
    prime = PrimeField(p)
    if e == 1:
        return prime

    from drinfeld_lab.algebra.factor import least_irreducible

    modulus = least_irreducible(prime, e)
    return FiniteField(prime, modulus.coeffs, constant_cardinality=q, check=False)


@lru_cache(maxsize=None)
def extension_field(fq: Field, degree: int) -> FiniteField:
    """F_{q^degree} built directly over F_q with the least irreducible modulus."""
    from drinfeld_lab.algebra.factor import least_irreducible

    modulus = least_irreducible(fq, degree)
    return FiniteField(fq, modulus.coeffs, check=False)
