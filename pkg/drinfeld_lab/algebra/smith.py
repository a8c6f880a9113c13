"""
Smith Normal Form over F_q[t]

Invariant factors of a matrix with polynomial entries by repeated
minimal-degree pivoting. Only the diagonal is returned; transformation
matrices are not tracked.
"""

from typing import List, Sequence, Tuple

from drinfeld_lab.algebra.poly import Poly


def smith_normal_form(matrix: Sequence[Sequence[Poly]]) -> Tuple[List[Poly], int]:
    """
    Invariant factors d_1 | d_2 | ... (monic, nonzero) and the rank.

    Args:
        matrix: rows of polynomials over a common field

    Returns:
        (invariant factors, rank)
    """
    a = [list(row) for row in matrix]
    if not a or not a[0]:
        return [], 0
    nrows, ncols = len(a), len(a[0])
    diagonal: List[Poly] = []

    top = 0
    while top < min(nrows, ncols):
        candidates = [
            (a[i][j].degree, i, j) for i in range(top, nrows) for j in range(top, ncols) if not a[i][j].is_zero()
        ]
        if not candidates:
            break
        _, pi, pj = min(candidates)
        a[top], a[pi] = a[pi], a[top]
        for row in a:
            row[top], row[pj] = row[pj], row[top]

        while True:
            pivot = a[top][top]
            changed = False
            for i in range(top + 1, nrows):
                if a[i][top].is_zero():
                    continue
                quotient, remainder = divmod(a[i][top], pivot)
                a[i] = [x - quotient * y for x, y in zip(a[i], a[top])]
                if not remainder.is_zero():
                    a[top], a[i] = a[i], a[top]
                    changed = True
                    break
            if changed:
                continue
            for j in range(top + 1, ncols):
                if a[top][j].is_zero():
                    continue
                quotient, remainder = divmod(a[top][j], pivot)
                for row in a:
                    row[j] = row[j] - quotient * row[top]
                if not remainder.is_zero():
                    for row in a:
                        row[top], row[j] = row[j], row[top]
                    changed = True
                    break
            if changed:
                continue
            offender = next(
                (
                    i
                    for i in range(top + 1, nrows)
                    if any(not pivot.divides(a[i][j]) for j in range(top + 1, ncols))
                ),
                None,
            )
            if offender is None:
                break
            a[top] = [x + y for x, y in zip(a[top], a[offender])]

        diagonal.append(a[top][top].monic())
        top += 1

    return diagonal, len(diagonal)


def invariant_factors(matrix: Sequence[Sequence[Poly]]) -> List[Poly]:
    """Non-unit invariant factors."""
    factors, _ = smith_normal_form(matrix)
    return [d for d in factors if d.degree > 0]
