"""
Factorization over Finite Fields

Square-free decomposition, distinct-degree and equal-degree (Cantor-Zassenhaus)
splitting, irreducibility testing, enumeration of monic irreducibles, minimal
polynomials and root finding of F_q-irreducibles inside extensions.
"""

import logging
import random
from functools import lru_cache
from itertools import count
from typing import Callable, List, Optional, Tuple

from sympy import divisors, factorint

from drinfeld_lab.algebra.fields import Element, Field, FiniteField
from drinfeld_lab.algebra.poly import Poly, Var
from drinfeld_lab.core.cache import get_cache
from drinfeld_lab.core.exceptions import AmbientCapError, DomainError

logger = logging.getLogger(__name__)

Factorization = List[Tuple[Poly, int]]


def _pth_root_poly(f: Poly) -> Poly:
    """g with g^p = f, for f whose derivative vanishes."""
    F = f.field
    p = F.characteristic
    return f._like(F.pth_root(f.coeffs[i]) for i in range(0, len(f.coeffs), p))


def squarefree_decomposition(f: Poly) -> Factorization:
    """Pairs (g, e) with g square-free, pairwise coprime and f = lc·Π g^e."""
    if f.is_zero():
        raise DomainError("cannot factor the zero polynomial")
    f = f.monic()
    if f.degree < 1:
        return []

    p = f.field.characteristic
    result: Factorization = []
    g = f.derivative()
    if g.is_zero():
        return [(h, e * p) for h, e in squarefree_decomposition(_pth_root_poly(f))]

    c = f.gcd(g)
    w = f // c
    i = 1
    while not w.is_one():
        y = w.gcd(c)
        z = w // y
        if z.degree > 0:
            result.append((z.monic(), i))
        i += 1
        w = y
        c = c // y
    if c.degree > 0:
        result.extend((h, e * p) for h, e in squarefree_decomposition(_pth_root_poly(c.monic())))
    return result


def distinct_degree_factorization(f: Poly) -> Factorization:
    """For square-free monic f: pairs (g, d) where g is the product of the degree-d factors."""
    Q = f.field.cardinality
    x = Poly.gen(f.field, f.var)
    result: Factorization = []
    rest = f
    h = x % rest if rest.degree > 0 else x
    d = 1
    while rest.degree >= 2 * d:
        h = h.powmod(Q, rest)
        g = rest.gcd(h - x)
        if g.degree > 0:
            result.append((g, d))
            rest = rest // g
            h = h % rest
        d += 1
    if rest.degree > 0:
        result.append((rest, rest.degree))
    return result


def _splitting_candidate(f: Poly, d: int, rng: random.Random) -> Poly:
    F = f.field
    Q = F.cardinality
    coeffs = [F.random_element(rng) for _ in range(f.degree)]
    a = Poly(F, coeffs, f.var)
    if a.degree < 1:
        a = a + Poly.gen(F, f.var)
    if F.characteristic == 2:
        m = (Q.bit_length() - 1) * d
        acc = a % f
        term = acc
        for _ in range(m - 1):
            term = (term * term) % f
            acc = acc + term
        return acc
    return a.powmod((Q**d - 1) // 2, f) - Poly.one(F, f.var)


def equal_degree_factorization(f: Poly, d: int, rng: random.Random) -> List[Poly]:
    """Split monic square-free f whose irreducible factors all have degree d."""
    if f.degree == d:
        return [f]
    while True:
        candidate = _splitting_candidate(f, d, rng)
        g = f.gcd(candidate)
        if 0 < g.degree < f.degree:
            break
    return equal_degree_factorization(g, d, rng) + equal_degree_factorization(f // g, d, rng)


def factor(f: Poly, rng: Optional[random.Random] = None) -> Factorization:
    """
    Factor f into monic irreducibles with multiplicities.

    The leading coefficient of f is the unit left out of the product. Splitting
    uses `rng`; a fixed seed makes the run replayable, and the returned list is
    sorted so it does not depend on the seed.
    """
    if f.is_zero():
        raise DomainError("cannot factor the zero polynomial")
    rng = rng or random.Random(0)
    result: Factorization = []
    for part, multiplicity in squarefree_decomposition(f):
        for block, d in distinct_degree_factorization(part):
            for irreducible in equal_degree_factorization(block, d, rng):
                result.append((irreducible, multiplicity))
    merged: dict = {}
    for g, e in result:
        merged[g] = merged.get(g, 0) + e
    return sorted(merged.items(), key=lambda item: item[0].sort_key())


def is_irreducible(f: Poly) -> bool:
    """Rabin's test."""
    n = f.degree
    if n < 1:
        return False
    if n == 1:
        return True
    f = f.monic()
    if f[0] == f.field.zero:
        return False
    Q = f.field.cardinality
    x = Poly.gen(f.field, f.var)
    powers = [x % f]
    for _ in range(n):
        powers.append(powers[-1].powmod(Q, f))
    if powers[n] != x % f:
        return False
    for ell in factorint(n):
        if f.gcd(powers[n // ell] - x).degree > 0:
            return False
    return True


def monic_polynomials(field: Field, degree: int, var: Var = Var.X):
    """All monic polynomials of the given degree in (degree, lexicographic) order."""
    Q = field.cardinality
    one = field.one
    for index in range(Q**degree):
        coeffs = []
        for _ in range(degree):
            index, digit = divmod(index, Q)
            coeffs.append(field.element(digit))
        yield Poly(field, coeffs + [one], var)


def necklace_count(q: int, n: int) -> int:
    """Number of monic irreducibles of degree n over F_q."""
    total = 0
    for d in divisors(n):
        exponents = factorint(d).values()
        if any(e > 1 for e in exponents):
            continue
        mu = -1 if len(exponents) % 2 else 1
        total += mu * q ** (n // d)
    return total // n


def irreducibles_of_degree(field: Field, degree: int, var: Var = Var.X) -> List[Poly]:
    if degree == 1:
        found = list(monic_polynomials(field, 1, var))
    else:
        found = [f for f in monic_polynomials(field, degree, var) if is_irreducible(f)]
    expected = necklace_count(field.cardinality, degree)
    if len(found) != expected:
        raise RuntimeError(
            f"Irreducible enumeration over {field} in degree {degree} found {len(found)}, expected {expected}"
        )
    return found


def irreducibles_up_to(field: Field, bound: int, var: Var = Var.X) -> List[Poly]:
    """Monic irreducibles of degree 1..bound, in (degree, lexicographic) order."""
    if bound < 1:
        raise DomainError("degree bound must be at least 1", {"bound": bound})
    result: List[Poly] = []
    for degree in range(1, bound + 1):
        result.extend(irreducibles_of_degree(field, degree, var))
    return result


def _field_key(field: Field) -> dict:
    key = {"q": field.q, "cardinality": field.cardinality}
    if isinstance(field, FiniteField):
        key["modulus"] = [field.base.encode(c) for c in field.modulus]
        key["base"] = _field_key(field.base)
    return key


@lru_cache(maxsize=None)
def least_irreducible(field: Field, degree: int, var: Var = Var.X) -> Poly:
    """The lexicographically least monic irreducible of the given degree (persisted)."""
    if degree < 1:
        raise DomainError("degree must be at least 1", {"degree": degree})

    key = {"field": _field_key(field), "degree": degree}

    def compute() -> list:
        for f in monic_polynomials(field, degree, var):
            if is_irreducible(f):
                logger.debug(f"Least irreducible of degree {degree} over {field}: {f}")
                return f.encode()
        raise RuntimeError(f"No irreducible polynomial of degree {degree} over {field}")

    encoded = get_cache().get_or_compute("moduli", key, compute)
    modulus = Poly.decode(field, encoded, var)
    if modulus.degree != degree or not modulus.is_monic():
        logger.warning(f"Cached modulus for degree {degree} over {field} is malformed; recomputing")
        modulus = Poly.decode(field, compute(), var)
    return modulus


def minimal_polynomial(alpha: Element, field: Field, var: Var = Var.X) -> Poly:
    """Minimal polynomial of alpha over the constant field F_q of `field`."""
    conjugates = [alpha]
    current = field.frob(alpha)
    while current != alpha:
        conjugates.append(current)
        current = field.frob(current)

    product = Poly.one(field, var)
    for c in conjugates:
        product = product * Poly(field, (field.neg(c), field.one), var)
    fq = field.constant_field
    return Poly(fq, (field.to_constant(c) for c in product.coeffs), var)


def splitting_degree(g: Poly, cap: Optional[int] = None) -> int:
    """
    Least N such that the square-free polynomial g splits over the degree-N
    extension of its coefficient field.

    Uses the linear map h ↦ h^|k| on k[x]/(g) and iterates it on x.
    """
    k = g.field
    if g.is_zero():
        raise DomainError("zero polynomial has no splitting field")
    if g.degree <= 1:
        return 1
    g = g.monic()
    if g.gcd(g.derivative()).degree > 0:
        raise DomainError("splitting degree needs a square-free polynomial")

    n = g.degree
    x = Poly.gen(k, g.var)
    xk = x.powmod(k.cardinality, g)
    columns = [Poly.one(k, g.var)]
    for _ in range(1, n):
        columns.append((columns[-1] * xk) % g)

    zero = k.zero
    target = x % g
    h = target
    for N in count(1):
        if cap is not None and N > cap:
            raise AmbientCapError(
                f"splitting degree exceeds cap {cap}", cap=cap, details={"degree": g.degree}
            )
        acc = [zero] * n
        for j, hj in enumerate(h.coeffs):
            if hj == zero:
                continue
            for i, c in enumerate(columns[j].coeffs):
                acc[i] = k.add(acc[i], k.mul(hj, c))
        h = Poly(k, acc, g.var)
        if h == target:
            return N
    raise AssertionError("unreachable")


def roots_of_irreducible(f: Poly, target: Field, rng: random.Random) -> List[Element]:
    """
    All roots in `target` of an irreducible f over F_q whose degree divides
    [target : F_q], in canonical order.

    Equal-degree splitting runs with elements of the subfield F_{q^deg f}
    obtained as traces, which keeps exponents at the size of that subfield.
    """
    m = f.degree
    dim = target.fq_dimension
    if m < 1 or dim % m:
        raise DomainError("polynomial degree must divide the extension degree", {"degree": m, "dimension": dim})

    F = target
    lifted = Poly(F, (F.from_constant(c) for c in f.monic().coeffs), Var.X)
    if m == 1:
        return [F.neg(lifted[0])]

    sub_size = target.q**m
    trace_steps = dim // m

    def subfield_element() -> Element:
        z = F.random_element(rng)
        acc = z
        for _ in range(trace_steps - 1):
            z = F.frob(z, m)
            acc = F.add(acc, z)
        return acc

    def split(g: Poly) -> List[Element]:
        if g.degree == 1:
            return [F.neg(g.monic()[0])]
        while True:
            r = subfield_element()
            if F.characteristic == 2:
                base = Poly(F, (F.zero, r), Var.X) % g
                acc = base
                term = base
                for _ in range(sub_size.bit_length() - 2):
                    term = (term * term) % g
                    acc = acc + term
                candidate = acc
            else:
                base = Poly(F, (r, F.one), Var.X)
                candidate = base.powmod((sub_size - 1) // 2, g) - Poly.one(F, Var.X)
            d = g.gcd(candidate)
            if 0 < d.degree < g.degree:
                return split(d) + split(g // d)

    return sorted(split(lifted), key=F.sort_key)


def embed_generator(source: FiniteField, target: Field, rng: random.Random) -> Element:
    """Image of source's generator under the canonical embedding (least root)."""
    fq = source.constant_field
    if source.base != fq:
        raise DomainError("embedding requires a field built directly over F_q")
    modulus = Poly(fq, source.modulus, Var.X)
    return roots_of_irreducible(modulus, target, rng)[0]


def field_embedding(
    source: Field, target: Field, rng: Optional[random.Random] = None
) -> Callable[[Element], Element]:
    """
    The canonical F_q-embedding source → target: identity, the constant
    embedding of F_q, or generator ↦ least root of the source modulus.
    The root is the least one whatever `rng` drives the splitting.
    """
    if source == target:
        return lambda x: x
    if source.cardinality == source.q:
        return target.from_constant
    if not isinstance(source, FiniteField):
        raise DomainError("only finite fields embed into finite extensions")
    rho = embed_generator(source, target, rng or random.Random(0))
    powers = [target.one]
    for _ in range(1, source.degree):
        powers.append(target.mul(powers[-1], rho))

    def embed(x: Element) -> Element:
        acc = target.zero
        for c, power in zip(x, powers):
            if c != source.base.zero:
                acc = target.add(acc, target.scalar_mul(c, power))
        return acc

    return embed
