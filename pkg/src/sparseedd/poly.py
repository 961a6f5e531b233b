"""Sparse polynomials with exact rational coefficients, and their supports.

Variables are indexed from 1 (``x_1 .. x_n``) in every public function, so
index ``i`` here is coordinate ``i`` of the (lambda, x_1, .., x_n) space used
by the Lagrange system, where lambda sits at coordinate 0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import _linalg as la
from .lattice import GeometryError, LatticePolytope, Point, exposed_face

#: Numerators and denominators of random coefficients are drawn from [-BOUND, BOUND] \ {0}.
COEFF_BOUND = 10**6


@dataclass(frozen=True)
class SupportSet:
    """A finite set of exponent vectors in N^n."""

    n: int
    points: frozenset[Point]

    def __post_init__(self) -> None:
        for p in self.points:
            if len(p) != self.n:
                raise GeometryError(f"exponent {p} has length {len(p)}, expected {self.n}")
            if any(x < 0 for x in p):
                raise GeometryError(f"exponent {p} has a negative entry")

    @classmethod
    def of(cls, points: Iterable[Sequence[int]], n: int | None = None) -> "SupportSet":
        pts = frozenset(tuple(int(x) for x in p) for p in points)
        if n is None:
            if not pts:
                raise GeometryError("cannot infer n from an empty support")
            n = len(next(iter(pts)))
        return cls(n, pts)

    @property
    def contains_origin(self) -> bool:
        return tuple([0] * self.n) in self.points

    def sorted_points(self) -> list[Point]:
        return sorted(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.sorted_points())

    def __bool__(self) -> bool:
        return bool(self.points)

    def face(self, w: Sequence[int]) -> tuple["SupportSet", int]:
        """The face exposed by ``w`` and the minimum of ``w . a``."""
        pts, h = exposed_face(self.points, w)
        return SupportSet(self.n, pts), h

    def polytope(self) -> LatticePolytope:
        return LatticePolytope(self.points)

    def to_dict(self) -> dict:
        return {"n": self.n, "points": [list(p) for p in self.sorted_points()]}

    @classmethod
    def from_dict(cls, data: Mapping) -> "SupportSet":
        return cls.of(data["points"], n=data.get("n"))


def derivative_support(support: SupportSet, i: int) -> SupportSet:
    """Support of d f / d x_i: drop points with a_i = 0, shift the rest by -e_i."""
    _check_index(support.n, i)
    k = i - 1
    return SupportSet(
        support.n,
        frozenset(p[:k] + (p[k] - 1,) + p[k + 1:] for p in support.points if p[k] > 0),
    )


def _check_index(n: int, i: int) -> None:
    if not 1 <= i <= n:
        raise IndexError(f"variable index {i} outside 1..{n}")


def parse_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        # decimal literal as written, not the binary float
        return Fraction(repr(value))
    raise TypeError(f"cannot read {value!r} as a rational number")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class SparsePolynomial:
    """Map from exponent vectors to nonzero rational coefficients.

    Treated as an immutable value. The zero polynomial has no terms.
    """

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping[Sequence[int], object] | Iterable[tuple[Sequence[int], object]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Point, Fraction] = {}
        for exp, coef in items:
            e = tuple(int(x) for x in exp)
            if len(e) != n:
                raise GeometryError(f"exponent {e} has length {len(e)}, expected {n}")
            if any(x < 0 for x in e):
                raise GeometryError(f"exponent {e} has a negative entry")
            acc[e] = acc.get(e, Fraction(0)) + parse_rational(coef)
        self.n = n
        self._terms = {e: c for e, c in sorted(acc.items()) if c != 0}

    @property
    def terms(self) -> dict[Point, Fraction]:
        return dict(self._terms)

    @property
    def support(self) -> SupportSet:
        return SupportSet(self.n, frozenset(self._terms))

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.n, tuple(self._terms.items())))

    def __add__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        if self.n != other.n:
            raise GeometryError("adding polynomials in different numbers of variables")
        return SparsePolynomial(self.n, list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self) -> "SparsePolynomial":
        return self.scale(-1)

    def __sub__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        return self + (-other)

    def scale(self, c) -> "SparsePolynomial":
        c = parse_rational(c)
        return SparsePolynomial(self.n, {e: c * v for e, v in self._terms.items()})

    def times_monomial(self, exp: Sequence[int], coef=1) -> "SparsePolynomial":
        """Multiply by ``coef * x^exp``."""
        c = parse_rational(coef)
        return SparsePolynomial(self.n, {la.add(e, exp): c * v for e, v in self._terms.items()})

    def embed(self, leading: int = 1) -> "SparsePolynomial":
        """Same polynomial in ``leading`` extra variables prepended (with exponent 0)."""
        pad = (0,) * leading
        return SparsePolynomial(self.n + leading, {pad + e: c for e, c in self._terms.items()})

    def __repr__(self) -> str:
        return f"SparsePolynomial({self.n}, {self.to_string()!r})"

    def to_string(self, names: Sequence[str] | None = None) -> str:
        if not self._terms:
            return "0"
        names = list(names) if names else [f"x{i + 1}" for i in range(self.n)]
        parts = []
        for e, c in self._terms.items():
            mono = "*".join(
                names[k] if x == 1 else f"{names[k]}^{x}" for k, x in enumerate(e) if x
            )
            coef = format_rational(c)
            parts.append(coef if not mono else (mono if c == 1 else f"{coef}*{mono}"))
        return " + ".join(parts).replace("+ -", "- ")

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "terms": [{"exp": list(e), "coef": format_rational(c)} for e, c in self._terms.items()],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "SparsePolynomial":
        return cls(int(data["n"]), [(t["exp"], t["coef"]) for t in data["terms"]])


def derivative(f: SparsePolynomial, i: int) -> SparsePolynomial:
    """Partial derivative d f / d x_i."""
    _check_index(f.n, i)
    k = i - 1
    return SparsePolynomial(
        f.n,
        {e[:k] + (e[k] - 1,) + e[k + 1:]: e[k] * c for e, c in f.terms.items() if e[k] > 0},
    )


def restrict_to_face(f: SparsePolynomial, w: Sequence[int]) -> SparsePolynomial:
    """Keep exactly the terms whose exponents minimize ``w . a`` over the support."""
    if len(w) != f.n:
        raise GeometryError(f"weight of length {len(w)} for a polynomial in {f.n} variables")
    if f.is_zero():
        return f
    face, _ = exposed_face(f.terms, w)
    return SparsePolynomial(f.n, {e: c for e, c in f.terms.items() if e in face})


def evaluate(f: SparsePolynomial, x: Sequence) -> Fraction:
    if len(x) != f.n:
        raise GeometryError(f"point of length {len(x)} for a polynomial in {f.n} variables")
    xs = [parse_rational(v) for v in x]
    total = Fraction(0)
    for e, c in f.terms.items():
        term = c
        for xi, k in zip(xs, e):
            if k:
                term *= xi**k
        total += term
    return total


def random_rational(rng: random.Random) -> Fraction:
    p = q = 0
    while p == 0:
        p = rng.randint(-COEFF_BOUND, COEFF_BOUND)
    while q == 0:
        q = rng.randint(-COEFF_BOUND, COEFF_BOUND)
    return Fraction(p, q)


def random_general(support: SupportSet, seed: int) -> SparsePolynomial:
    """Seeded stand-in for a polynomial that is general given its support."""
    if not support:
        raise GeometryError("random_general needs a nonempty support")
    rng = random.Random(seed)
    return SparsePolynomial(support.n, {p: random_rational(rng) for p in support.sorted_points()})
