"""Fraction-free (Bareiss) elimination over Q or Q[c].

Entries are either BigRationals or ``Poly`` objects.  Elimination stays in the
ring (every Bareiss division is exact); the final back-substitution moves to
the fraction field, returning BigRationals or ``RatFunc`` values.
"""

from __future__ import annotations

from typing import Sequence

from .exactnum import Poly, Q, RatFunc


class SingularSystem(ArithmeticError):
    pass


def _exact_div(a, b):
    if isinstance(a, Poly) or isinstance(b, Poly):
        return Poly.coerce(a).exact_div(Poly.coerce(b))
    return a / b


def _is_zero(x) -> bool:
    return x.is_zero() if isinstance(x, Poly) else x == 0


def bareiss_eliminate(aug: list[list]) -> tuple[list[list], int]:
    """Reduce an n x (n + k) augmented matrix in place to upper-triangular form.

    Returns the matrix and the sign of the row permutation used.  The last
    pivot equals the determinant of the leading n x n block times that sign.
    """
    n = len(aug)
    sign = 1
    prev = Q(1)
    for k in range(n - 1):
        if _is_zero(aug[k][k]):
            for i in range(k + 1, n):
                if not _is_zero(aug[i][k]):
                    aug[k], aug[i] = aug[i], aug[k]
                    sign = -sign
                    break
            else:
                raise SingularSystem(f"zero column at step {k}")
        pk = aug[k][k]
        rowk = aug[k]
        for i in range(k + 1, n):
            rowi = aug[i]
            aik = rowi[k]
            for j in range(k + 1, len(rowi)):
                rowi[j] = _exact_div(pk * rowi[j] - aik * rowk[j], prev)
            rowi[k] = Q(0) * pk
        prev = pk
    if n and _is_zero(aug[n - 1][n - 1]):
        raise SingularSystem("matrix is singular")
    return aug, sign


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list:
    """Solve ``matrix @ x = rhs`` exactly.

    Numeric input gives BigRationals; polynomial input gives ``RatFunc``s.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix) or len(rhs) != n:
        raise ValueError("square system expected")
    if n == 0:
        return []
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    symbolic = any(isinstance(x, Poly) for row in aug for x in row)
    bareiss_eliminate(aug)
    lift = RatFunc.coerce if symbolic else Q
    x = [None] * n
    for i in range(n - 1, -1, -1):
        s = lift(aug[i][n])
        for j in range(i + 1, n):
            s = s - lift(aug[i][j]) * x[j]
        x[i] = s / lift(aug[i][i])
    return x


def determinant(matrix: Sequence[Sequence]):
    n = len(matrix)
    if n == 0:
        return Q(1)
    aug = [list(row) for row in matrix]
    try:
        aug, sign = bareiss_eliminate(aug)
    except SingularSystem:
        return Q(0) * aug[0][0]
    return aug[n - 1][n - 1] * sign


def leading_minors(matrix: Sequence[Sequence]) -> list:
    """Leading principal minors of a numeric or polynomial matrix."""
    return [determinant([list(row[:k]) for row in matrix[:k]]) for k in range(1, len(matrix) + 1)]
