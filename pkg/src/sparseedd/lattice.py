"""Exact geometry of lattice polytopes.

Polytopes are stored by their vertex sets; facets, volumes and faces are
computed with integer arithmetic only. The hull is built by a
beneath-beyond pass over the points, projected onto a coordinate frame of
their affine hull so lower-dimensional inputs need no special casing beyond
dimensions 0 and 1.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import factorial, isqrt
from typing import Iterable, Sequence

import numpy as np

from . import _linalg as la

Point = tuple[int, ...]

#: Face-lattice enumeration refuses ambient dimensions above this unless overridden.
DEFAULT_MAX_DIM = 6


class GeometryError(ValueError):
    """Malformed geometric input (dimension mismatch, empty point set, bad index)."""


@dataclass(frozen=True)
class Facet:
    """A facet given by an inner normal: ``normal . x >= offset`` on the polytope."""

    normal: Point
    offset: int
    vertices: frozenset[Point]


@dataclass
class _HullData:
    vertices: tuple[Point, ...]
    dim: int
    facets: tuple[Facet, ...]
    equations: tuple[Point, ...]
    normalized_volume: int
    simplices: tuple[tuple[Point, ...], ...]


def _as_points(points: Iterable[Sequence[int]]) -> list[Point]:
    pts = sorted({tuple(int(x) for x in p) for p in points})
    if not pts:
        raise GeometryError("convex hull of an empty point set")
    m = len(pts[0])
    for p in pts:
        if len(p) != m:
            raise GeometryError(f"dimension mismatch: {pts[0]} vs {p}")
    return pts


def _initial_simplex(pts: list[Point], d: int) -> list[int]:
    chosen = [0]
    diffs: list[Point] = []
    for i in range(1, len(pts)):
        cand = la.sub(pts[i], pts[0])
        if la.rank(diffs + [cand]) > len(diffs):
            diffs.append(cand)
            chosen.append(i)
            if len(chosen) == d + 1:
                break
    return chosen


def _insertion_order(pts: list[Point], skip: set[int]) -> list[int]:
    """Points extreme in some sampled direction first, the rest afterwards.

    Order only affects speed, never the hull: inserting (likely) vertices
    early lets later boundary and interior points be discarded as invisible.
    """
    rng = random.Random(0x5EED)
    d = len(pts[0])
    extreme: set[int] = set()
    for _ in range(8 * d + 16):
        w = [rng.randint(-(10**6), 10**6) for _ in range(d)]
        best = min(range(len(pts)), key=lambda i: la.dot(w, pts[i]))
        extreme.add(best)
    first = [i for i in sorted(extreme) if i not in skip]
    rest = [i for i in range(len(pts)) if i not in skip and i not in extreme]
    rng.shuffle(first)
    rng.shuffle(rest)
    return first + rest


def _int64_safe(pts: list[Point]) -> bool:
    """Whether facet normals and their dot products with points fit in int64."""
    d = len(pts[0])
    spread = max(max(p[k] for p in pts) - min(p[k] for p in pts) for k in range(d))
    mag = max(abs(x) for p in pts for x in p)
    # Hadamard bound on the cofactor normals, then on the dot products
    normal_bound = (isqrt(d) + 1) ** (d - 1) * max(spread, 1) ** (d - 1)
    return 2 * d * normal_bound * max(mag, 1) < 2**62


def _beneath_beyond(pts: list[Point]) -> list[tuple[tuple[int, ...], Point, int]]:
    """Triangulated boundary of a full-dimensional point set in Z^d, d >= 2.

    Returns simplicial facets as (sorted vertex indices, inner normal, offset).
    Points lying on a facet hyperplane are treated as not visible, so the
    boundary may contain coplanar pieces; callers merge them by hyperplane.
    """
    d = len(pts[0])
    simplex = _initial_simplex(pts, d)
    interior = tuple(sum(pts[i][k] for i in simplex) for k in range(d))
    scale = d + 1
    dtype = np.int64 if _int64_safe(pts) else object

    facets: dict[int, tuple[tuple[int, ...], Point, int]] = {}
    ridges: dict[tuple[int, ...], set[int]] = defaultdict(set)
    cap = 64
    normals = np.zeros((cap, d), dtype=dtype)
    offsets = np.zeros(cap, dtype=dtype)
    alive = np.zeros(cap, dtype=bool)
    counter = 0

    def add_facet(verts: tuple[int, ...]) -> None:
        nonlocal counter, cap, normals, offsets, alive
        normal = la.normal_vector([pts[i] for i in verts])
        offset = la.dot(normal, pts[verts[0]])
        if la.dot(normal, interior) < scale * offset:
            normal = tuple(-x for x in normal)
            offset = -offset
        fid = counter
        counter += 1
        if fid >= cap:
            cap *= 2
            normals = np.concatenate([normals, np.zeros_like(normals)])
            offsets = np.concatenate([offsets, np.zeros_like(offsets)])
            alive = np.concatenate([alive, np.zeros_like(alive)])
        normals[fid] = normal
        offsets[fid] = offset
        alive[fid] = True
        facets[fid] = (verts, normal, offset)
        for k in range(d):
            ridges[verts[:k] + verts[k + 1:]].add(fid)

    for face in combinations(sorted(simplex), d):
        add_facet(face)

    points_arr = np.array(pts, dtype=dtype)
    in_simplex = set(simplex)
    for pi in _insertion_order(pts, in_simplex):
        p = pts[pi]
        used = counter
        below = (normals[:used] @ points_arr[pi]) < offsets[:used]
        visible = np.flatnonzero(below & alive[:used]).tolist()
        if not visible:
            continue
        vis = set(visible)
        horizon = []
        for fid in visible:
            verts = facets[fid][0]
            for k in range(d):
                r = verts[:k] + verts[k + 1:]
                for other in ridges[r]:
                    if other != fid and other not in vis:
                        horizon.append(r)
        for fid in visible:
            verts = facets.pop(fid)[0]
            alive[fid] = False
            for k in range(d):
                r = verts[:k] + verts[k + 1:]
                ridges[r].discard(fid)
                if not ridges[r]:
                    del ridges[r]
        for r in horizon:
            add_facet(tuple(sorted(r + (pi,))))
    return list(facets.values())


def _compute_hull(pts: list[Point]) -> _HullData:
    m = len(pts[0])
    base = pts[0]
    diffs = [la.sub(p, base) for p in pts[1:]]
    _, pivots = la.row_echelon(diffs) if diffs else ([], [])
    d = len(pivots)
    equations = tuple(la.integer_nullspace(diffs, m)) if d < m else ()

    if d == 0:
        # a point is the whole of R^0, whose volume is 1
        return _HullData((base,), 0, (), equations, 1 if m == 0 else 0, ())

    def lift(normal: Sequence[int]) -> Point:
        full = [0] * m
        for k, c in enumerate(pivots):
            full[c] = normal[k]
        return tuple(full)

    proj = [tuple(p[c] for c in pivots) for p in pts]

    if d == 1:
        lo = min(range(len(pts)), key=lambda i: proj[i])
        hi = max(range(len(pts)), key=lambda i: proj[i])
        verts = tuple(sorted({pts[lo], pts[hi]}))
        facets = (
            Facet(lift((1,)), proj[lo][0], frozenset({pts[lo]})),
            Facet(lift((-1,)), -proj[hi][0], frozenset({pts[hi]})),
        )
        nvol = proj[hi][0] - proj[lo][0] if m == 1 else 0
        simplices = ((pts[lo],), (pts[hi],))
        return _HullData(verts, 1, facets, equations, nvol, simplices)

    tri = _beneath_beyond(proj)

    planes: dict[tuple[Point, int], None] = {}
    for _, n, c in tri:
        planes.setdefault((n, c), None)
    plane_list = list(planes)

    candidates = sorted({i for verts, _, _ in tri for i in verts})
    vertices = []
    for i in candidates:
        q = proj[i]
        incident = [n for n, c in plane_list if la.dot(n, q) == c]
        if la.rank(incident) == d:
            vertices.append(pts[i])
    vproj = {v: tuple(v[c] for c in pivots) for v in vertices}

    facets = []
    for n, c in plane_list:
        fv = frozenset(v for v in vertices if la.dot(n, vproj[v]) == c)
        facets.append(Facet(lift(n), c, fv))
    facets.sort(key=lambda f: (f.normal, f.offset))

    nvol = 0
    if d == m:
        apex = proj[0]
        for verts, _, _ in tri:
            nvol += abs(la.det([la.sub(proj[i], apex) for i in verts]))
    simplices = tuple(tuple(pts[i] for i in verts) for verts, _, _ in tri)
    return _HullData(tuple(sorted(vertices)), d, tuple(facets), equations, nvol, simplices)


class LatticePolytope:
    """Convex hull of finitely many lattice points, in a fixed ambient dimension.

    Equality and hashing go by (ambient_dim, vertices); ``generators`` keeps the
    original points for provenance.
    """

    def __init__(self, points: Iterable[Sequence[int]]):
        pts = _as_points(points)
        self.generators: tuple[Point, ...] = tuple(pts)
        self.ambient_dim: int = len(pts[0])
        self._hull = _compute_hull(pts)

    @property
    def vertices(self) -> tuple[Point, ...]:
        return self._hull.vertices

    @property
    def dim(self) -> int:
        """Dimension of the affine hull."""
        return self._hull.dim

    @property
    def facets(self) -> tuple[Facet, ...]:
        """Facets relative to the affine hull, normals lifted to ambient coordinates."""
        return self._hull.facets

    @property
    def equations(self) -> tuple[Point, ...]:
        """Integer basis of the directions constant on the polytope."""
        return self._hull.equations

    @property
    def normalized_volume(self) -> int:
        """m! times the m-dimensional volume (m = ambient dimension)."""
        return self._hull.normalized_volume

    @cached_property
    def volume(self) -> Fraction:
        return Fraction(self._hull.normalized_volume, factorial(self.ambient_dim))

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    def contains(self, point: Sequence[int]) -> bool:
        p = tuple(point)
        if any(la.dot(e, p) != la.dot(e, self.vertices[0]) for e in self.equations):
            return False
        return all(la.dot(f.normal, p) >= f.offset for f in self.facets)

    def face(self, w: Sequence[int]) -> tuple[frozenset[Point], int]:
        """Vertices of the face minimizing ``w . x`` and the minimum."""
        return exposed_face(self.vertices, w)

    def translate(self, t: Sequence[int]) -> "LatticePolytope":
        return LatticePolytope([la.add(v, t) for v in self.vertices])

    def to_dict(self) -> dict:
        return {
            "dim": self.ambient_dim,
            "vertices": [list(v) for v in self.vertices],
            "generators": [list(g) for g in self.generators],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LatticePolytope":
        pts = data.get("generators") or data["vertices"]
        poly = cls(pts)
        if "dim" in data and data["dim"] != poly.ambient_dim:
            raise GeometryError(f"declared dim {data['dim']} but points live in Z^{poly.ambient_dim}")
        return poly

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LatticePolytope):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.vertices))

    def __repr__(self) -> str:
        return f"LatticePolytope(dim={self.dim}, ambient={self.ambient_dim}, vertices={list(self.vertices)})"


def convex_hull(points: Iterable[Sequence[int]]) -> LatticePolytope:
    return LatticePolytope(points)


def box(a: Sequence[int]) -> LatticePolytope:
    """The box [0,a_1] x ... x [0,a_n] (entries may be 0)."""
    corners = [[]]
    for ai in a:
        corners = [c + [x] for c in corners for x in sorted({0, ai})]
    return LatticePolytope(corners)


def box_points(a: Sequence[int]) -> list[Point]:
    """All lattice points of the box [0,a_1] x ... x [0,a_n]."""
    pts: list[list[int]] = [[]]
    for ai in a:
        pts = [p + [x] for p in pts for x in range(ai + 1)]
    return [tuple(p) for p in pts]


def euclidean_volume(poly: LatticePolytope) -> Fraction:
    return poly.volume


def minkowski_sum(p: LatticePolytope, q: LatticePolytope) -> LatticePolytope:
    if p.ambient_dim != q.ambient_dim:
        raise GeometryError(f"Minkowski sum of polytopes in R^{p.ambient_dim} and R^{q.ambient_dim}")
    return LatticePolytope({la.add(a, b) for a in p.vertices for b in q.vertices})


def minkowski_sum_all(polys: Sequence[LatticePolytope]) -> LatticePolytope:
    if not polys:
        raise GeometryError("Minkowski sum of no polytopes")
    acc = polys[0]
    for q in polys[1:]:
        acc = minkowski_sum(acc, q)
    return acc


def project(poly: LatticePolytope, j: int) -> LatticePolytope:
    """Image under the coordinate projection forgetting coordinate ``j`` (0-based)."""
    if not 0 <= j < poly.ambient_dim:
        raise GeometryError(f"coordinate {j} out of range for ambient dimension {poly.ambient_dim}")
    return LatticePolytope(v[:j] + v[j + 1:] for v in poly.vertices)


def exposed_face(points: Iterable[Sequence[int]], w: Sequence[int]) -> tuple[frozenset[Point], int]:
    """The subset of ``points`` minimizing ``w . a`` together with the minimum value.

    ``w = 0`` returns every point with minimum 0; callers wanting proper faces
    must reject it themselves.
    """
    pts = [tuple(p) for p in points]
    if not pts:
        raise GeometryError("exposed face of an empty point set")
    if any(len(p) != len(w) for p in pts):
        raise GeometryError(f"weight vector of length {len(w)} does not match points")
    values = [la.dot(w, p) for p in pts]
    h = min(values)
    return frozenset(p for p, v in zip(pts, values) if v == h), h


def face_tuple(point_sets: Sequence[Iterable[Sequence[int]]], w: Sequence[int]) -> tuple[frozenset[Point], ...]:
    return tuple(exposed_face(ps, w)[0] for ps in point_sets)


def face_lattice(poly: LatticePolytope) -> list[frozenset[Point]]:
    """All nonempty faces (as vertex sets), the polytope itself included."""
    full = frozenset(poly.vertices)
    facet_sets = [f.vertices for f in poly.facets]
    seen = {full}
    frontier = list(dict.fromkeys(facet_sets))
    seen.update(frontier)
    while frontier:
        nxt = []
        for face in frontier:
            for fs in facet_sets:
                inter = face & fs
                if inter and inter not in seen:
                    seen.add(inter)
                    nxt.append(inter)
        frontier = nxt
    return sorted(seen, key=lambda s: (len(s), sorted(s)))


def normal_representatives(
    polys: Sequence[LatticePolytope], max_dim: int = DEFAULT_MAX_DIM
) -> frozenset[Point]:
    """One nonzero primitive weight vector per face of the common normal fan.

    Every nonzero integer ``w`` exposes, simultaneously on all inputs, the same
    tuple of faces as some returned vector. Built from the Minkowski sum S of
    the inputs: each proper face of S gets the sum of the facet normals of S
    containing it, and when S is not full-dimensional a direction constant on
    S stands in for the face S itself.
    """
    if not polys:
        raise GeometryError("normal_representatives of no polytopes")
    m = polys[0].ambient_dim
    if any(p.ambient_dim != m for p in polys):
        raise GeometryError("polytopes live in different ambient dimensions")
    if m > max_dim:
        raise GeometryError(f"face enumeration capped at dimension {max_dim} (got {m}); raise max_dim to override")
    s = minkowski_sum_all(polys)
    units = [tuple(1 if k == i else 0 for k in range(m)) for i in range(m)]
    if s.dim == 0:
        return frozenset(units + [tuple(-x for x in u) for u in units])

    reps: set[Point] = set()
    full = frozenset(s.vertices)
    for face in face_lattice(s):
        if face == full:
            continue
        w = [0] * m
        for f in s.facets:
            if face <= f.vertices:
                w = [a + b for a, b in zip(w, f.normal)]
        reps.add(la.primitive(w))
    for e in s.equations:
        reps.add(la.primitive(e))
    reps.discard(tuple([0] * m))
    return frozenset(reps)
