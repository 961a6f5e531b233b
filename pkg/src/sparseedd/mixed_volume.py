"""Exact mixed volumes of lattice polytopes.

Normalization: MV(Q, .., Q) = m! Vol(Q) for m polytopes in R^m, so the mixed
volume of lattice polytopes is a nonnegative integer.

Two independent engines:

* ``mv_oracle``: inclusion-exclusion over the 2^m - 1 Minkowski sums of
  subsets, using exact normalized hull volumes.
* ``mv_cells``: enumerates the mixed cells induced by a seeded integer lifting
  and adds up |det| of their edge directions. All feasibility tests are exact
  integer computations; ties mean the lifting is not generic, in which case
  the computation is repeated with the next seed.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from math import factorial, gcd
from typing import Mapping, Sequence

from . import _linalg as la
from .lattice import GeometryError, LatticePolytope, Point, minkowski_sum, project

ENGINES = ("oracle", "cells", "both")
LIFT_RANGE = 10**6
DEFAULT_RETRIES = 8


class MixedVolumeInputError(GeometryError):
    """Wrong number of polytopes for their ambient dimension, or similar."""


class EngineMismatchError(RuntimeError):
    def __init__(self, oracle: int, cells: int):
        super().__init__(f"engines disagree: oracle={oracle}, cells={cells}")
        self.oracle = oracle
        self.cells = cells


class DegenerateLiftingError(RuntimeError):
    """Every lifting tried produced a tie; raised after the retry limit."""


@dataclass(frozen=True)
class MixedCell:
    """One edge {a, b} per input polytope (input order) and |det(b_i - a_i)|."""

    edges: tuple[tuple[Point, Point], ...]
    volume: int

    def to_dict(self) -> dict:
        return {"edges": [[list(a), list(b)] for a, b in self.edges], "volume": self.volume}

    @classmethod
    def from_dict(cls, data: Mapping) -> "MixedCell":
        return cls(tuple((tuple(a), tuple(b)) for a, b in data["edges"]), int(data["volume"]))


@dataclass(frozen=True)
class MixedVolumeResult:
    value: int
    engine: str
    cells: tuple[MixedCell, ...] | None = None
    seed: int | None = None

    @property
    def path_count(self) -> int | None:
        """Number of homotopy paths a polyhedral homotopy would start from these cells."""
        if self.cells is None:
            return None
        return sum(c.volume for c in self.cells)

    def to_dict(self) -> dict:
        out = {
            "value": self.value,
            "engine": self.engine,
            "cells": None if self.cells is None else [c.to_dict() for c in self.cells],
        }
        if self.seed is not None:
            out["seed"] = self.seed
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "MixedVolumeResult":
        cells = data.get("cells")
        return cls(
            int(data["value"]),
            data["engine"],
            None if cells is None else tuple(MixedCell.from_dict(c) for c in cells),
            data.get("seed"),
        )


def _check_input(polys: Sequence[LatticePolytope]) -> int:
    m = len(polys)
    if m == 0:
        raise MixedVolumeInputError("mixed volume of no polytopes")
    for q in polys:
        if q.ambient_dim != m:
            raise MixedVolumeInputError(f"{m} polytopes given but one lives in R^{q.ambient_dim}")
    return m


# ---------------------------------------------------------------- oracle


def _subset_volume(vertex_sets: Sequence[Sequence[Point]]) -> int:
    acc = LatticePolytope(vertex_sets[0])
    for vs in vertex_sets[1:]:
        acc = minkowski_sum(acc, LatticePolytope(vs))
    return acc.normalized_volume


def mv_oracle(polys: Sequence[LatticePolytope], workers: int | None = None) -> int:
    """Mixed volume by inclusion-exclusion over subset Minkowski sums."""
    m = _check_input(polys)
    masks = range(1, 1 << m)
    if workers and workers > 1:
        jobs = [[polys[i].vertices for i in range(m) if mask >> i & 1] for mask in masks]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            vols = dict(zip(masks, ex.map(_subset_volume, jobs)))
    else:
        sums: dict[int, LatticePolytope] = {}
        vols = {}
        for mask in masks:
            top = mask.bit_length() - 1
            rest = mask & ~(1 << top)
            sums[mask] = polys[top] if rest == 0 else minkowski_sum(sums[rest], polys[top])
            vols[mask] = sums[mask].normalized_volume
    total = 0
    for mask in sorted(vols):
        sign = -1 if (m - bin(mask).count("1")) % 2 else 1
        total += sign * vols[mask]
    # the terms are normalized volumes m! Vol, the identity wants plain Vol
    mv, rem = divmod(total, factorial(m))
    if rem or mv < 0:
        raise ArithmeticError(f"inclusion-exclusion total {total} is not a nonnegative multiple of {m}!")
    return mv


# ---------------------------------------------------------------- exact LP


def _solve_ineqs(rows: list[tuple[tuple[int, ...], object]], d: int, rng: random.Random):
    """A point x (as numerators X and positive denominator D) with coeffs . x <= rhs
    for every row, or None when the system is infeasible.

    Incremental: keep a point satisfying the rows seen so far; when the next row
    is violated, any point of the enlarged system can be moved onto that row's
    hyperplane, so recurse there in one dimension less.
    """
    live = []
    for a, b in rows:
        if any(a):
            live.append((a, b))
        elif b < 0:
            return None
    if d == 0:
        return (), 1
    rng.shuffle(live)
    X = [0] * d
    D = 1
    for j, (a, b) in enumerate(live):
        if la.dot(a, X) <= b * D:
            continue
        pt = _point_on_hyperplane(a, b, live[:j], d, rng)
        if pt is None:
            return None
        X, D = pt
    return X, D


def _point_on_hyperplane(a, b, rows, d, rng):
    k = min((i for i in range(d) if a[i]), key=lambda i: abs(a[i]))
    ak = a[k]
    reduced = [_substitute(c, beta, a, b, k) for c, beta in rows]
    sub = _solve_ineqs(reduced, d - 1, rng)
    if sub is None:
        return None
    Y, E = sub
    others = [l for l in range(d) if l != k]
    X = [0] * d
    for l, y in zip(others, Y):
        X[l] = y * ak
    num = b * E - sum(a[l] * y for l, y in zip(others, Y))
    X[k] = num
    D = ak * E
    if D < 0:
        X = [-x for x in X]
        D = -D
    g = D
    for x in X:
        g = gcd(g, x)
    if g > 1:
        X = [x // g for x in X]
        D //= g
    return X, D


def _scale_row(coeffs: list[int], rhs: int) -> tuple[tuple[int, ...], int]:
    """Divide a row by the gcd of all its entries (coefficients and rhs)."""
    g = rhs
    for c in coeffs:
        g = gcd(g, c)
    if g > 1:
        return tuple(c // g for c in coeffs), rhs // g
    return tuple(coeffs), rhs


def feasible(ineqs: Sequence[tuple[Sequence[int], int]], d: int, seed: int = 0) -> bool:
    """Exact test whether {x in R^d : a . x <= b for all (a, b)} is nonempty."""
    rows = [_scale_row(list(a), b) for a, b in ineqs]
    return _solve_ineqs(rows, d, random.Random(seed)) is not None


# ---------------------------------------------------------------- lifting / cells


class _Degenerate(Exception):
    pass


def _substitute(row, rhs, e, g, k):
    """Eliminate x_k from ``row . x (<=|=) rhs`` using ``e . x = g``; the row is
    multiplied by |e_k| > 0, so inequalities keep their direction."""
    ek = e[k]
    s = 1 if ek > 0 else -1
    ck = row[k]
    coeffs = [s * (ek * row[l] - ck * e[l]) for l in range(len(row)) if l != k]
    return _scale_row(coeffs, s * (ek * rhs - ck * g))


def _eliminate(eqs, ineqs, d):
    """Solve the equations by integer pivoting and rewrite the inequalities in the
    remaining free coordinates.

    Returns (rows, dim, redundant) or None when the equations are inconsistent;
    ``redundant`` says some equation was implied by the others.
    """
    rows = [_scale_row(list(a), b) for a, b in ineqs]
    pending = list(eqs)
    redundant = False
    while pending:
        e, g = pending.pop(0)
        if not any(e):
            if g:
                return None
            redundant = True
            continue
        k = min((i for i in range(d) if e[i]), key=lambda i: abs(e[i]))
        pending = [_substitute(c, gamma, e, g, k) for c, gamma in pending]
        rows = [_substitute(c, beta, e, g, k) for c, beta in rows]
        d -= 1
    return rows, d, redundant


class _CellSearch:
    """Mixed-cell enumeration for one fixed lifting.

    An edge {a, b} of polytope i is a lower edge when some alpha satisfies
    (b - a) . alpha = w(a) - w(b) and (c - a) . alpha >= w(a) - w(c) for all
    vertices c. Mixed cells are tuples of lower edges, one per polytope, whose
    alpha-sets meet; for a generic lifting they meet in exactly one point with
    every other inequality strict.
    """

    def __init__(self, verts: Sequence[Sequence[Point]], lifts: Sequence[dict[Point, int]], seed: int):
        self.m = len(verts)
        self.verts = verts
        self.lifts = lifts
        self.rng = random.Random(seed)
        self.lower: list[list[tuple[Point, Point]]] = [self._lower_edges(i) for i in range(self.m)]
        self._pair_ok: dict[tuple, bool] = {}

    # constraints in alpha-space, as (coeffs, rhs) meaning coeffs . alpha <= rhs
    def _ineqs(self, i: int, edge: tuple[Point, Point]) -> list[tuple[tuple[int, ...], int]]:
        a, b = edge
        w = self.lifts[i]
        return [(la.sub(a, c), w[c] - w[a]) for c in self.verts[i] if c != a and c != b]

    def _equation(self, i: int, edge: tuple[Point, Point]) -> tuple[tuple[int, ...], int]:
        a, b = edge
        w = self.lifts[i]
        return la.sub(b, a), w[a] - w[b]

    def _feasible(self, chosen: Sequence[tuple[int, tuple[Point, Point]]]) -> bool:
        reduced = _eliminate(
            [self._equation(i, e) for i, e in chosen],
            [r for i, e in chosen for r in self._ineqs(i, e)],
            self.m,
        )
        if reduced is None:
            return False
        rows, d, redundant = reduced
        if _solve_ineqs(rows, d, self.rng) is None:
            return False
        if redundant:
            raise _Degenerate("dependent edge directions with consistent lifting")
        return True

    def _lower_edges(self, i: int) -> list[tuple[Point, Point]]:
        vs = self.verts[i]
        out = []
        for a, b in combinations(vs, 2):
            if self._feasible([(i, (a, b))]):
                out.append((a, b))
        return out

    def _compatible(self, i, e, j, f) -> bool:
        key = (i, e, j, f) if i < j else (j, f, i, e)
        hit = self._pair_ok.get(key)
        if hit is None:
            hit = self._feasible([(i, e), (j, f)])
            self._pair_ok[key] = hit
        return hit

    def order(self) -> list[int]:
        return sorted(range(self.m), key=lambda i: (len(self.lower[i]), i))

    def run(self, first: tuple[Point, Point] | None = None) -> list[MixedCell]:
        order = self.order()
        cells: list[MixedCell] = []
        if any(not L for L in self.lower):
            return cells
        starts = self.lower[order[0]] if first is None else [first]
        for e in starts:
            self._extend(order, [(order[0], e)], cells)
        return cells

    def _extend(self, order, chosen, cells):
        level = len(chosen)
        if level == self.m:
            cells.append(self._leaf(chosen))
            return
        j = order[level]
        for f in self.lower[j]:
            if not all(self._compatible(i, e, j, f) for i, e in chosen):
                continue
            nxt = chosen + [(j, f)]
            if level + 1 < self.m and not self._feasible(nxt):
                continue
            if level + 1 == self.m and not self._leaf_feasible(nxt):
                continue
            self._extend(order, nxt, cells)

    def _leaf_feasible(self, chosen) -> bool:
        reduced = _eliminate(
            [self._equation(i, e) for i, e in chosen],
            [r for i, e in chosen for r in self._ineqs(i, e)],
            self.m,
        )
        if reduced is None:
            return False
        rows, d, redundant = reduced
        if redundant:
            if _solve_ineqs(rows, d, self.rng) is None:
                return False
            raise _Degenerate("mixed cell with dependent edge directions")
        # d == 0 here: every row is the constant test 0 <= rhs
        if any(b < 0 for _, b in rows):
            return False
        if any(b == 0 for _, b in rows):
            raise _Degenerate("tie at a mixed cell")
        return True

    def _leaf(self, chosen) -> MixedCell:
        by_index = dict(chosen)
        edges = tuple(by_index[i] for i in range(self.m))
        vol = abs(la.det([la.sub(b, a) for a, b in edges]))
        return MixedCell(edges, vol)


def _lifting(polys: Sequence[LatticePolytope], seed: int) -> list[dict[Point, int]]:
    out = []
    for i, q in enumerate(polys):
        rng = random.Random(f"lift:{seed}:{i}")
        out.append({v: rng.randrange(LIFT_RANGE) for v in q.vertices})
    return out


def _branch(args) -> list[MixedCell]:
    verts, lifts, seed, first = args
    return _CellSearch(verts, lifts, seed).run(first)


def _cells_once(polys, seed: int, workers: int | None) -> list[MixedCell]:
    verts = [q.vertices for q in polys]
    lifts = _lifting(polys, seed)
    search = _CellSearch(verts, lifts, seed)
    if not (workers and workers > 1) or any(not L for L in search.lower):
        return search.run()
    firsts = search.lower[search.order()[0]]
    jobs = [(verts, lifts, seed, e) for e in firsts]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        parts = list(ex.map(_branch, jobs))
    return [c for part in parts for c in part]


def mv_cells(
    polys: Sequence[LatticePolytope],
    seed: int = 0,
    max_retries: int = DEFAULT_RETRIES,
    workers: int | None = None,
) -> MixedVolumeResult:
    """Mixed volume with its mixed-cell certificate."""
    _check_input(polys)
    reasons = []
    for attempt in range(max_retries + 1):
        s = seed + attempt
        try:
            cells = _cells_once(polys, s, workers)
        except _Degenerate as exc:
            reasons.append(f"seed {s}: {exc}")
            continue
        cells.sort(key=lambda c: c.edges)
        return MixedVolumeResult(sum(c.volume for c in cells), "cells", tuple(cells), s)
    raise DegenerateLiftingError(
        f"lifting not generic after {max_retries + 1} seeds: " + "; ".join(reasons)
    )


def mixed_volume(
    polys: Sequence[LatticePolytope],
    engine: str = "both",
    seed: int = 0,
    workers: int | None = None,
) -> MixedVolumeResult:
    """Dispatch to one engine, or run both and insist they agree."""
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}; choose from {ENGINES}")
    if engine == "oracle":
        return MixedVolumeResult(mv_oracle(polys, workers), "oracle")
    res = mv_cells(polys, seed=seed, workers=workers)
    if engine == "cells":
        return res
    ref = mv_oracle(polys, workers)
    if ref != res.value:
        raise EngineMismatchError(ref, res.value)
    return MixedVolumeResult(ref, "both", res.cells, res.seed)


def mv_interval_split(
    polys: Sequence[LatticePolytope], b: int, j: int, engine: str = "oracle", seed: int = 0
) -> int:
    """MV(Q_1, .., Q_{m-1}, [0, b e_j]) computed as b * MV of the projections
    forgetting coordinate j (1-based, j in 1..m)."""
    if b < 1:
        raise ValueError("b must be a positive integer")
    m = len(polys) + 1
    for q in polys:
        if q.ambient_dim != m:
            raise MixedVolumeInputError(f"{m - 1} polytopes must live in R^{m}, got R^{q.ambient_dim}")
    if not 1 <= j <= m:
        raise MixedVolumeInputError(f"coordinate {j} outside 1..{m}")
    if m == 1:
        # MV of no polytopes in R^0 is 1
        return b
    projected = [project(q, j - 1) for q in polys]
    return b * mixed_volume(projected, engine=engine, seed=seed).value


def interval(m: int, b: int, j: int) -> LatticePolytope:
    """The segment [0, b e_j] in R^m (j 1-based)."""
    return LatticePolytope([(0,) * m, tuple(b if k == j - 1 else 0 for k in range(m))])


__all__ = [
    "ENGINES",
    "DegenerateLiftingError",
    "EngineMismatchError",
    "MixedCell",
    "MixedVolumeInputError",
    "MixedVolumeResult",
    "feasible",
    "interval",
    "mixed_volume",
    "mv_cells",
    "mv_interval_split",
    "mv_oracle",
]
