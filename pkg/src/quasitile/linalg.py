"""Small dense linear algebra over exact fields (Fraction or QuadValue entries).

Matrices are lists of row lists. Nothing here is fast; sizes are at most a
handful of rows, which is all the lattice and polytope code needs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .exactnum import QuadValue, Scalar

Matrix = list[list[Scalar]]


def _lift(x: Scalar) -> Scalar:
    return Fraction(x) if isinstance(x, int) else x


def copy(m: Sequence[Sequence[Scalar]]) -> Matrix:
    return [[_lift(x) for x in row] for row in m]


def rref(m: Sequence[Sequence[Scalar]]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = copy(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = 1 / a[r][c] if isinstance(a[r][c], QuadValue) else Fraction(1) / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m: Sequence[Sequence[Scalar]]) -> int:
    if not m:
        return 0
    return len(rref(m)[1])


def nullspace(m: Sequence[Sequence[Scalar]], ncols: int | None = None) -> Matrix:
    """Basis (as rows) of ``{x : m x = 0}``."""
    if not m:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    r, piv = rref(m)
    n = len(m[0])
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v: list[Scalar] = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -r[i][f]
        basis.append(v)
    return basis


def det(m: Sequence[Sequence[Scalar]]) -> Scalar:
    a = copy(m)
    n = len(a)
    result: Scalar = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if a[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            result = -result
        result = result * a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return result


def solve(m: Sequence[Sequence[Scalar]], b: Sequence[Scalar]) -> list[Scalar] | None:
    """Unique solution of the square system ``m x = b``; ``None`` if singular."""
    n = len(m)
    aug = [list(row) + [b[i]] for i, row in enumerate(m)]
    r, piv = rref(aug)
    if piv != list(range(n)):
        return None
    return [r[i][n] for i in range(n)]


def inverse(m: Sequence[Sequence[Scalar]]) -> Matrix:
    n = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    r, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in r]


def matmul(a: Sequence[Sequence[Scalar]], b: Sequence[Sequence[Scalar]]) -> Matrix:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence[Scalar]], v: Sequence[Scalar]) -> list[Scalar]:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def transpose(a: Sequence[Sequence[Scalar]]) -> Matrix:
    return [list(col) for col in zip(*a)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def affine_rank(points: Sequence[Sequence[Scalar]]) -> int:
    """Dimension of the affine hull of ``points`` (-1 for an empty set)."""
    if not points:
        return -1
    base = points[0]
    diffs = [[x - y for x, y in zip(p, base)] for p in points[1:]]
    return rank(diffs) if diffs else 0


def is_rational(x: Scalar) -> bool:
    return not isinstance(x, QuadValue) or x.b == 0
