"""
Matrix Groups over A/(a)

Square matrices over a residue ring, stored as flat tuples of element indices
so that products are table lookups. Provides determinants, characteristic
polynomials, orders, GL_r(A/(a)) by closure and its conjugacy classes.
"""

import logging
from collections import deque
from functools import cached_property
from itertools import combinations, permutations
from math import prod
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from drinfeld_lab.algebra.residue_ring import ResidueRing, RingElement
from drinfeld_lab.core.exceptions import DomainError, EnumerationCapError

logger = logging.getLogger(__name__)

Matrix = Tuple[int, ...]

MAX_TABLE_RING = 4096


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def closure(
    generators: Iterable[Matrix], mul: Callable[[Matrix, Matrix], Matrix], identity: Matrix, cap: int
) -> frozenset:
    """Subgroup generated by invertible elements of a finite group, breadth first."""
    gens = list(dict.fromkeys(generators))
    seen = {identity}
    queue = deque([identity])
    while queue:
        g = queue.popleft()
        for h in gens:
            x = mul(g, h)
            if x not in seen:
                seen.add(x)
                if len(seen) > cap:
                    raise EnumerationCapError(f"group closure exceeds {cap} elements", cap=cap)
                queue.append(x)
    return frozenset(seen)


class MatrixAlgebra:
    """r × r matrices over A/(a) with index-table arithmetic."""

    def __init__(self, ring: ResidueRing, r: int):
        if r < 1:
            raise DomainError("matrix size must be positive", {"r": r})
        if ring.cardinality > MAX_TABLE_RING:
            raise EnumerationCapError(
                f"residue ring of size {ring.cardinality} is too large for table arithmetic", cap=MAX_TABLE_RING
            )
        self.ring = ring
        self.r = r
        self.elements: List[RingElement] = list(ring.elements())
        self.index: Dict[RingElement, int] = {x: i for i, x in enumerate(self.elements)}
        n = len(self.elements)
        self.add_table = [[self.index[ring.add(x, y)] for y in self.elements] for x in self.elements]
        self.mul_table = [[self.index[ring.mul(x, y)] for y in self.elements] for x in self.elements]
        self.neg_table = [self.index[ring.neg(x)] for x in self.elements]
        self.zero = self.index[ring.zero]
        self.one = self.index[ring.one]
        self.unit_inverse: Dict[int, int] = {}
        for i in range(n):
            row = self.mul_table[i]
            for j in range(n):
                if row[j] == self.one:
                    self.unit_inverse[i] = j
                    break

    # conversion

    def from_rows(self, rows: Sequence[Sequence[RingElement]]) -> Matrix:
        if len(rows) != self.r or any(len(row) != self.r for row in rows):
            raise DomainError("matrix has the wrong size", {"r": self.r})
        return tuple(self.index[x] for row in rows for x in row)

    def to_rows(self, m: Matrix) -> List[List[RingElement]]:
        r = self.r
        return [[self.elements[m[i * r + j]] for j in range(r)] for i in range(r)]

    def encode(self, m: Matrix) -> List[List[list]]:
        return [[self.ring.encode(x) for x in row] for row in self.to_rows(m)]

    def entry(self, m: Matrix, i: int, j: int) -> int:
        return m[i * self.r + j]

    @cached_property
    def identity(self) -> Matrix:
        r = self.r
        return tuple(self.one if i == j else self.zero for i in range(r) for j in range(r))

    # arithmetic

    def mul(self, a: Matrix, b: Matrix) -> Matrix:
        r = self.r
        add, mt = self.add_table, self.mul_table
        out = []
        for i in range(r):
            for j in range(r):
                acc = self.zero
                for k in range(r):
                    acc = add[acc][mt[a[i * r + k]][b[k * r + j]]]
                out.append(acc)
        return tuple(out)

    def _minor_det(self, m: Matrix, rows: Sequence[int], cols: Sequence[int]) -> int:
        add, mt, neg = self.add_table, self.mul_table, self.neg_table
        r = self.r
        acc = self.zero
        for perm in permutations(range(len(rows))):
            term = self.one
            for i, pi in enumerate(perm):
                term = mt[term][m[rows[i] * r + cols[pi]]]
                if term == self.zero:
                    break
            if term == self.zero:
                continue
            acc = add[acc][term if _perm_sign(perm) > 0 else neg[term]]
        return acc

    def det(self, m: Matrix) -> int:
        full = range(self.r)
        return self._minor_det(m, full, full)

    def charpoly(self, m: Matrix) -> Tuple[int, ...]:
        """det(X·I − m), ascending coefficients, monic."""
        r = self.r
        coeffs = [self.zero] * (r + 1)
        coeffs[r] = self.one
        add, neg = self.add_table, self.neg_table
        for k in range(1, r + 1):
            e_k = self.zero
            for subset in combinations(range(r), k):
                e_k = add[e_k][self._minor_det(m, subset, subset)]
            coeffs[r - k] = e_k if k % 2 == 0 else neg[e_k]
        return tuple(coeffs)

    def is_invertible(self, m: Matrix) -> bool:
        return self.det(m) in self.unit_inverse

    def inverse(self, m: Matrix) -> Matrix:
        d = self.det(m)
        if d not in self.unit_inverse:
            raise DomainError("matrix is not invertible")
        d_inv = self.unit_inverse[d]
        r = self.r
        if r == 1:
            return (d_inv,)
        out = []
        for i in range(r):
            for j in range(r):
                rows = [k for k in range(r) if k != j]
                cols = [k for k in range(r) if k != i]
                cof = self._minor_det(m, rows, cols)
                if (i + j) % 2:
                    cof = self.neg_table[cof]
                out.append(self.mul_table[d_inv][cof])
        return tuple(out)

    def order(self, m: Matrix, cap: Optional[int] = None) -> int:
        cap = cap or self.gl_order
        x = m
        n = 1
        while x != self.identity:
            x = self.mul(x, m)
            n += 1
            if n > cap:
                raise DomainError("matrix order exceeds the group order; matrix is not invertible")
        return n

    def is_scalar(self, m: Matrix) -> bool:
        r = self.r
        d = m[0]
        return all(m[i * r + j] == (d if i == j else self.zero) for i in range(r) for j in range(r))

    def scalar(self, m: Matrix) -> RingElement:
        if not self.is_scalar(m):
            raise DomainError("matrix is not scalar")
        return self.elements[m[0]]

    # GL_r(A/(a))

    @cached_property
    def gl_order(self) -> int:
        """Π over p^e ‖ a of Q_p^{(e−1)r²}·Π_{j<r}(Q_p^r − Q_p^j), Q_p = q^{deg p}."""
        Q = self.ring.field.cardinality
        r = self.r
        total = 1
        for p, e in self.ring.prime_factors:
            Qp = Q**p.degree
            total *= Qp ** ((e - 1) * r * r) * prod(Qp**r - Qp**j for j in range(r))
        return total

    @cached_property
    def sl_order(self) -> int:
        return self.gl_order // self.ring.unit_count

    @cached_property
    def gl_generators(self) -> List[Matrix]:
        """Elementary matrices with entries c·t^k and diagonal unit matrices."""
        r = self.r
        F = self.ring.field
        gens: List[Matrix] = []
        additive = set()
        for k in range(self.ring.degree):
            for c in F.elements():
                if c != F.zero:
                    coeffs = [F.zero] * self.ring.degree
                    coeffs[k] = c
                    additive.add(self.index[tuple(coeffs)])
        for i in range(r):
            for j in range(r):
                if i == j:
                    continue
                for x in sorted(additive):
                    m = list(self.identity)
                    m[i * r + j] = x
                    gens.append(tuple(m))
        for u in sorted(self.unit_inverse):
            m = list(self.identity)
            m[0] = u
            gens.append(tuple(m))
        return gens

    def general_linear_group(self, cap: int) -> frozenset:
        if self.gl_order > cap:
            raise EnumerationCapError(f"|GL_{self.r}| = {self.gl_order} exceeds cap {cap}", cap=cap)
        group = closure(self.gl_generators, self.mul, self.identity, cap)
        if len(group) != self.gl_order:
            raise RuntimeError(f"GL closure has {len(group)} elements, expected {self.gl_order}")
        return group

    def conjugacy_classes(self, cap: int) -> List[Tuple[Matrix, ...]]:
        """Conjugacy classes of GL, each sorted, ordered by their least element."""
        group = self.general_linear_group(cap)
        gens = self.gl_generators
        gen_inverses = [self.inverse(h) for h in gens]
        remaining = set(group)
        classes: List[Tuple[Matrix, ...]] = []
        while remaining:
            start = min(remaining)
            orbit = {start}
            queue = deque([start])
            while queue:
                g = queue.popleft()
                for h, h_inv in zip(gens, gen_inverses):
                    x = self.mul(self.mul(h, g), h_inv)
                    if x not in orbit:
                        orbit.add(x)
                        queue.append(x)
            remaining -= orbit
            classes.append(tuple(sorted(orbit)))
        classes.sort(key=lambda c: c[0])
        logger.debug(f"GL_{self.r}({self.ring.modulus}) has {len(classes)} conjugacy classes")
        return classes

    def contains_sl(self, subgroup: frozenset) -> bool:
        if len(subgroup) % self.sl_order:
            return False
        one = self.one
        count = sum(1 for g in subgroup if self.det(g) == one)
        return count == self.sl_order

    def det_subgroup(self, mats: Iterable[Matrix]) -> List[RingElement]:
        """The subgroup of units generated by the determinants, sorted."""
        dets = {self.det(m) for m in mats}
        gens = [(d,) for d in dets]
        group = closure(
            gens, lambda x, y: (self.mul_table[x[0]][y[0]],), (self.one,), self.ring.unit_count
        )
        return sorted((self.elements[g[0]] for g in group), key=self.ring.sort_key)
