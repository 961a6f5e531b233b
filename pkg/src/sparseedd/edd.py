"""Euclidean distance degree bound from a support, and the closed forms for boxes."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import factorial, prod
from typing import Mapping, Sequence

from .lagrange import build_supports, unit
from .lattice import LatticePolytope, box, box_points, project
from .mixed_volume import MixedVolumeResult, mixed_volume
from .poly import SupportSet

WARN_CLOSED_FORM = "closed form for the box disagrees with the mixed volume"


@dataclass(frozen=True)
class BoxSpec:
    """Side lengths of the box [0,a_1] x .. x [0,a_n]."""

    a: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.a:
            raise ValueError("a box needs at least one side")
        if any(int(x) != x or x < 1 for x in self.a):
            raise ValueError(f"box sides must be positive integers, got {self.a}")
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))

    @property
    def n(self) -> int:
        return len(self.a)

    def support(self) -> SupportSet:
        """Every lattice point of the box."""
        return SupportSet(self.n, frozenset(box_points(self.a)))


def _as_box(a) -> BoxSpec:
    return a if isinstance(a, BoxSpec) else BoxSpec(tuple(a))


def elementary_symmetric(k: int, a: Sequence[int]) -> int:
    if not 1 <= k <= len(a):
        raise ValueError(f"k = {k} outside 1..{len(a)}")
    return sum(prod(c) for c in combinations(a, k))


def box_edd(a) -> int:
    """E(a) = sum over k of k! e_k(a)."""
    a = _as_box(a).a
    return sum(factorial(k) * elementary_symmetric(k, a) for k in range(1, len(a) + 1))


def box_projection_sum(a) -> int:
    """Sum of the normalized volumes of all nonempty coordinate projections of B(a).

    Each projection is built as a polytope by dropping coordinates one at a
    time, and its volume comes from the hull code, not from the side lengths.
    """
    a = _as_box(a).a
    n = len(a)
    full = box(a)
    total = 0
    for r in range(1, n + 1):
        for keep in combinations(range(n), r):
            q = full
            for j in sorted(set(range(n)) - set(keep), reverse=True):
                q = project(q, j)
            total += q.normalized_volume
    return total


def box_full_support(support: SupportSet) -> BoxSpec | None:
    """The box whose lattice points are exactly ``support``, if there is one."""
    if not support:
        return None
    a = tuple(max(p[k] for p in support.points) for k in range(support.n))
    if any(x < 1 for x in a):
        return None
    if len(support) != prod(x + 1 for x in a):
        return None
    return BoxSpec(a)


def pyramid_polytopes(a) -> list[LatticePolytope]:
    """Pyr(a) = hull({0} x B(a) and e_0) followed by
    P_i(a) = hull({0} x B(a - e_i), e_0, e_0 + e_i) for i = 1..m."""
    a = _as_box(a).a
    m = len(a)
    e0 = unit(m + 1, 0)
    base = [(0,) + v for v in box(a).vertices]
    polys = [LatticePolytope(base + [e0])]
    for i in range(1, m + 1):
        shrunk = tuple(x - (k == i - 1) for k, x in enumerate(a))
        pts = [(0,) + v for v in box(shrunk).vertices]
        pts += [e0, tuple(x + y for x, y in zip(e0, unit(m + 1, i)))]
        polys.append(LatticePolytope(pts))
    return polys


def pyramid_mv(a, engine: str = "both", seed: int = 0, workers: int | None = None) -> int:
    """MV(Pyr(a), P_1(a), .., P_m(a)); equals 1 + E(a)."""
    return mixed_volume(pyramid_polytopes(a), engine=engine, seed=seed, workers=workers).value


@dataclass(frozen=True)
class EddReport:
    support: SupportSet
    contains_origin: bool
    mv: MixedVolumeResult
    edd_value: int
    closed_form: int | None = None
    warnings: tuple[str, ...] = field(default=())

    @property
    def status(self) -> str:
        """'exact' when 0 is in the support (the mixed volume is the EDD of a
        general f), else 'bound'."""
        return "exact" if self.contains_origin else "bound"

    def to_dict(self) -> dict:
        return {
            "support": self.support.to_dict(),
            "contains_origin": self.contains_origin,
            "status": self.status,
            "edd_value": self.edd_value,
            "closed_form": self.closed_form,
            "mv": self.mv.to_dict(),
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "EddReport":
        return cls(
            SupportSet.from_dict(data["support"]),
            bool(data["contains_origin"]),
            MixedVolumeResult.from_dict(data["mv"]),
            int(data["edd_value"]),
            data.get("closed_form"),
            tuple(data.get("warnings", ())),
        )


def edd_bound(A: SupportSet, engine: str = "both", seed: int = 0, workers: int | None = None) -> EddReport:
    """Mixed volume of the Lagrange system supports of A."""
    supports = build_supports(A)
    mv = mixed_volume(supports.polytopes(), engine=engine, seed=seed, workers=workers)
    warnings = list(supports.warnings)
    spec = box_full_support(A)
    closed = box_edd(spec) if spec is not None else None
    if closed is not None and closed != mv.value:
        warnings.append(WARN_CLOSED_FORM)
    return EddReport(A, A.contains_origin, mv, mv.value, closed, tuple(warnings))
