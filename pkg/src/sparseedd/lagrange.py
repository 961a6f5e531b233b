"""Supports and polynomials of the Lagrange multiplier system for the distance problem.

The system lives in n+1 variables (lambda, x_1, .., x_n) with lambda at
coordinate 0. Its entries are

    f,   d_i f - lambda*u_i + lambda*x_i   (i = 1..n).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .lattice import GeometryError, LatticePolytope, Point
from .poly import (
    SparsePolynomial,
    SupportSet,
    derivative,
    derivative_support,
    format_rational,
    parse_rational,
    random_rational,
)

WARN_NO_ORIGIN = "support does not contain 0: the mixed volume is only an upper bound"


def lift(point: Sequence[int], level: int = 0) -> Point:
    """Prepend the lambda exponent."""
    return (level,) + tuple(point)


def unit(n_plus_1: int, k: int) -> Point:
    return tuple(1 if j == k else 0 for j in range(n_plus_1))


@dataclass(frozen=True)
class LagrangeSupports:
    """P = {0} x A and P_i = ({0} x d_iA) u {e_0, e_0 + e_i}, all in Z^{n+1}."""

    n: int
    P: SupportSet
    Pi: tuple[SupportSet, ...]
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def polytopes(self) -> list[LatticePolytope]:
        """Newton polytopes in the order P, P_1, .., P_n."""
        return [s.polytope() for s in (self.P, *self.Pi)]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "P": [list(p) for p in self.P.sorted_points()],
            "Pi": [[list(p) for p in s.sorted_points()] for s in self.Pi],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "LagrangeSupports":
        n = int(data["n"])
        return cls(
            n,
            SupportSet.of(data["P"], n=n + 1),
            tuple(SupportSet.of(pts, n=n + 1) for pts in data["Pi"]),
        )


def build_supports(A: SupportSet) -> LagrangeSupports:
    if not A:
        raise GeometryError("the support must be nonempty")
    n = A.n
    if n < 1:
        raise GeometryError("need at least one variable")
    P = SupportSet(n + 1, frozenset(lift(a) for a in A.points))
    e0 = unit(n + 1, 0)
    Pi = []
    for i in range(1, n + 1):
        pts = {lift(b) for b in derivative_support(A, i).points}
        pts.add(e0)
        pts.add(tuple(x + y for x, y in zip(e0, unit(n + 1, i))))
        Pi.append(SupportSet(n + 1, frozenset(pts)))
    warnings = () if A.contains_origin else (WARN_NO_ORIGIN,)
    return LagrangeSupports(n, P, tuple(Pi), warnings)


@dataclass(frozen=True)
class LagrangeSystem:
    f: SparsePolynomial
    u: tuple[Fraction, ...]
    entries: tuple[SparsePolynomial, ...]

    def to_dict(self) -> dict:
        return {
            "f": self.f.to_dict(),
            "u": [format_rational(c) for c in self.u],
            "entries": [e.to_dict() for e in self.entries],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "LagrangeSystem":
        return build_system(SparsePolynomial.from_dict(data["f"]), data["u"])


def build_system(f: SparsePolynomial, u: Sequence) -> LagrangeSystem:
    n = f.n
    if len(u) != n:
        raise GeometryError(f"u has length {len(u)}, expected {n}")
    uq = tuple(parse_rational(c) for c in u)
    e0 = unit(n + 1, 0)
    entries = [f.embed()]
    for i in range(1, n + 1):
        lam_x = tuple(x + y for x, y in zip(e0, unit(n + 1, i)))
        entries.append(derivative(f, i).embed() + SparsePolynomial(n + 1, [(e0, -uq[i - 1]), (lam_x, 1)]))
    return LagrangeSystem(f, uq, tuple(entries))


def random_general_u(n: int, seed: int) -> tuple[Fraction, ...]:
    """Seeded nonzero rational data point."""
    rng = random.Random(f"u:{seed}")
    return tuple(random_rational(rng) for _ in range(n))
