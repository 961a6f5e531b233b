"""Small exact integer linear algebra used by the geometry and mixed-volume code.

Everything here works on tuples/lists of Python ints (or Fractions where noted)
and never touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Vector = tuple[int, ...]


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def sub(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def add(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def primitive(v: Sequence[int]) -> Vector:
    """Divide an integer vector by the gcd of its entries (zero vector unchanged)."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free Bareiss elimination."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def row_echelon(rows: Sequence[Sequence[int]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q. Returns (nonzero rows, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(a)):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows: Sequence[Sequence[int]]) -> int:
    return len(row_echelon(rows)[1])


def integer_nullspace(rows: Sequence[Sequence[int]], ncols: int) -> list[Vector]:
    """Basis of {x : rows @ x = 0} made of primitive integer vectors."""
    if not rows:
        return [tuple(1 if i == j else 0 for i in range(ncols)) for j in range(ncols)]
    red, pivots = row_echelon(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        x = [Fraction(0)] * ncols
        x[fcol] = Fraction(1)
        for r, pc in enumerate(pivots):
            x[pc] = -red[r][fcol]
        den = 1
        for v in x:
            den = den * v.denominator // gcd(den, v.denominator)
        basis.append(primitive([int(v * den) for v in x]))
    return basis


def solve(rows: Sequence[Sequence[int]], rhs: Sequence[int]) -> list[Fraction] | None:
    """Unique solution of a square system over Q, or None when singular."""
    n = len(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = row_echelon(aug)
    if len(pivots) < n or n in pivots:
        return None
    return [red[i][n] for i in range(n)]


def normal_vector(points: Sequence[Sequence[int]]) -> Vector:
    """Primitive normal of the hyperplane through d affinely independent points of Z^d.

    Computed as the generalized cross product of the difference vectors, so the
    result is an integer vector; the zero vector signals affine dependence.
    """
    base = points[0]
    diffs = [sub(p, base) for p in points[1:]]
    d = len(base)
    normal = []
    for k in range(d):
        minor = [r[:k] + r[k + 1:] for r in diffs]
        val = det(minor)
        normal.append(-val if k % 2 else val)
    return primitive(normal)
