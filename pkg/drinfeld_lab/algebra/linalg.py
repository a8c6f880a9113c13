"""
Linear Algebra over Finite Fields

Dense matrices with entries in a Field. Used for kernels of F_q-linear maps
(torsion, division fibers, semilinear commutation systems) and for small
matrices over residue fields.
"""

from dataclasses import dataclass
from typing import Any, List, Optional, Sequence, Tuple

from drinfeld_lab.algebra.fields import Element, Field
from drinfeld_lab.core.exceptions import DomainError

Vector = Tuple[Element, ...]


@dataclass(frozen=True)
class FqMatrix:
    """Immutable rows × cols matrix over `field`, stored row-major."""

    field: Field
    rows: Tuple[Vector, ...]
    ncols: int

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence[Element]], ncols: Optional[int] = None) -> "FqMatrix":
        data = tuple(tuple(r) for r in rows)
        width = ncols if ncols is not None else (len(data[0]) if data else 0)
        if any(len(r) != width for r in data):
            raise DomainError("ragged matrix rows")
        return cls(field, data, width)

    @classmethod
    def from_columns(cls, field: Field, columns: Sequence[Sequence[Element]], nrows: int) -> "FqMatrix":
        cols = [tuple(c) for c in columns]
        rows = tuple(tuple(c[i] for c in cols) for i in range(nrows))
        return cls(field, rows, len(cols))

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "FqMatrix":
        return cls(field, tuple((field.zero,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, field: Field, n: int) -> "FqMatrix":
        z, o = field.zero, field.one
        return cls(field, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nrows, self.ncols

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def apply(self, v: Sequence[Element]) -> Vector:
        if len(v) != self.ncols:
            raise DomainError("dimension mismatch", {"expected": self.ncols, "got": len(v)})
        F = self.field
        out = []
        for r in self.rows:
            acc = F.zero
            for a, b in zip(r, v):
                if a != F.zero and b != F.zero:
                    acc = F.add(acc, F.mul(a, b))
            out.append(acc)
        return tuple(out)

    def __matmul__(self, other: "FqMatrix") -> "FqMatrix":
        if self.ncols != other.nrows:
            raise DomainError("dimension mismatch", {"left": self.shape, "right": other.shape})
        cols = [other.column(j) for j in range(other.ncols)]
        out_cols = [self.apply(c) for c in cols]
        return FqMatrix.from_columns(self.field, out_cols, self.nrows)

    def __add__(self, other: "FqMatrix") -> "FqMatrix":
        F = self.field
        return FqMatrix(
            F, tuple(tuple(F.add(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols
        )

    def __sub__(self, other: "FqMatrix") -> "FqMatrix":
        F = self.field
        return FqMatrix(
            F, tuple(tuple(F.sub(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.ncols
        )

    def rref(self) -> Tuple["FqMatrix", List[int]]:
        """Reduced row echelon form and pivot columns."""
        F = self.field
        rows = [list(r) for r in self.rows]
        pivots: List[int] = []
        lead = 0
        for col in range(self.ncols):
            pivot_row = next((i for i in range(lead, len(rows)) if rows[i][col] != F.zero), None)
            if pivot_row is None:
                continue
            rows[lead], rows[pivot_row] = rows[pivot_row], rows[lead]
            inv = F.inv(rows[lead][col])
            rows[lead] = [F.mul(inv, x) for x in rows[lead]]
            for i in range(len(rows)):
                if i != lead and rows[i][col] != F.zero:
                    c = rows[i][col]
                    rows[i] = [F.sub(x, F.mul(c, y)) for x, y in zip(rows[i], rows[lead])]
            pivots.append(col)
            lead += 1
            if lead == len(rows):
                break
        return FqMatrix(F, tuple(tuple(r) for r in rows), self.ncols), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel(self) -> List[Vector]:
        """Basis of {v : M·v = 0}, one vector per free column."""
        F = self.field
        reduced, pivots = self.rref()
        pivot_set = set(pivots)
        basis = []
        for free in range(self.ncols):
            if free in pivot_set:
                continue
            v = [F.zero] * self.ncols
            v[free] = F.one
            for row_index, col in enumerate(pivots):
                v[col] = F.neg(reduced.rows[row_index][free])
            basis.append(tuple(v))
        return basis

    def solve(self, rhs: Sequence[Element]) -> Optional[Vector]:
        """One solution of M·x = rhs, or None when the system is inconsistent."""
        F = self.field
        augmented = FqMatrix(
            F, tuple(tuple(r) + (b,) for r, b in zip(self.rows, rhs)), self.ncols + 1
        )
        reduced, pivots = augmented.rref()
        if pivots and pivots[-1] == self.ncols:
            return None
        x = [F.zero] * self.ncols
        for row_index, col in enumerate(pivots):
            x[col] = reduced.rows[row_index][self.ncols]
        return tuple(x)

    def inverse(self) -> "FqMatrix":
        n = self.nrows
        if n != self.ncols:
            raise DomainError("inverse of a non-square matrix")
        F = self.field
        ident = FqMatrix.identity(F, n)
        augmented = FqMatrix(F, tuple(r + i for r, i in zip(self.rows, ident.rows)), 2 * n)
        reduced, pivots = augmented.rref()
        if pivots[:n] != list(range(n)):
            raise DomainError("matrix is singular")
        return FqMatrix(F, tuple(r[n:] for r in reduced.rows), n)

    def encode(self) -> List[List[Any]]:
        return [[self.field.encode(x) for x in r] for r in self.rows]


def kernel(matrix: FqMatrix) -> List[Vector]:
    return matrix.kernel()


def reverse_echelon_basis(field: Field, vectors: Sequence[Sequence[Element]]) -> List[Vector]:
    """
    Basis of the span of `vectors`, reduced so that each basis vector has a
    distinct highest nonzero coordinate equal to one and every other basis
    vector vanishes there. Sorted by that coordinate, descending.

    Enumerating c_0·b_0 + c_1·b_1 + ... with c_0 outermost then lists the span
    in increasing order of the reversed-coordinate sort key.
    """
    if not vectors:
        return []
    n = len(vectors[0])
    reversed_rows = [tuple(reversed(v)) for v in vectors]
    reduced, pivots = FqMatrix.from_rows(field, reversed_rows, n).rref()
    basis = [tuple(reversed(reduced.rows[i])) for i in range(len(pivots))]
    return basis
