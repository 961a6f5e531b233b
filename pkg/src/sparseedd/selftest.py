"""Acceptance sweep: one check per acceptance criterion, each returning a
pass/fail record with a short detail string."""

from __future__ import annotations

import inspect
import itertools
import random
import time
from dataclasses import dataclass
from math import factorial
from typing import Callable, Sequence

from .edd import BoxSpec, box_edd, box_projection_sum, edd_bound, pyramid_mv
from .facial import Case, Shape, audit, classify_w, euler_witness
from .lagrange import build_supports
from .lattice import LatticePolytope, exposed_face, face_tuple, minkowski_sum
from .mixed_volume import interval, mixed_volume, mv_cells, mv_interval_split, mv_oracle
from .poly import SupportSet, derivative, derivative_support, random_general, restrict_to_face

TRAPEZOID = SupportSet.of([(0, 0), (1, 0), (0, 1), (1, 1), (2, 1)])
BIQUADRATIC_SPARSE = SupportSet.of([(0, 0), (2, 0), (0, 2), (2, 2)])
#: mixed volume of the Lagrange supports of BIQUADRATIC_SPARSE, computed once by the oracle
BIQUADRATIC_SPARSE_MV = 12


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number}: {self.name} ({self.detail}; {self.seconds:.1f}s)"


def box_sweep_specs(quick: bool = False) -> list[tuple[int, ...]]:
    specs = [a for n in (1, 2, 3) for a in itertools.product((1, 2, 3), repeat=n)]
    if not quick:
        specs += list(itertools.product((1, 2), repeat=4))
    return specs


def random_polytope(
    rng: random.Random, m: int, max_coord: int = 4, max_points: int | None = None, min_points: int = 1
) -> LatticePolytope:
    k = rng.randint(min_points, max_points or m + 2)
    return LatticePolytope([tuple(rng.randint(0, max_coord) for _ in range(m)) for _ in range(k)])


def random_support(rng: random.Random, n: int, max_coord: int = 3, extra: int = 5, origin: bool = True) -> SupportSet:
    pts = {tuple(rng.randint(0, max_coord) for _ in range(n)) for _ in range(rng.randint(1, extra))}
    if origin:
        pts.add((0,) * n)
    return SupportSet.of(pts, n=n)


def weight_grid(n: int, r: int = 2) -> list[tuple[int, ...]]:
    return [w for w in itertools.product(range(-r, r + 1), repeat=n) if any(w)]


# ---------------------------------------------------------------- criteria


def check_box_sweep(engine: str = "both", quick: bool = False) -> tuple[bool, str]:
    bad = []
    specs = box_sweep_specs(quick)
    for a in specs:
        got = edd_bound(BoxSpec(a).support(), engine=engine).edd_value
        if got != box_edd(a) or box_projection_sum(a) != box_edd(a):
            bad.append((a, got, box_edd(a)))
    return not bad, f"{len(specs)} boxes, engine={engine}, mismatches={bad}"


def check_biquadratic(engine: str = "both") -> tuple[bool, str]:
    full = edd_bound(BoxSpec((2, 2)).support(), engine=engine).edd_value
    sparse = edd_bound(BIQUADRATIC_SPARSE, engine=engine).edd_value
    ok = full == 12 and sparse >= 12 and sparse == BIQUADRATIC_SPARSE_MV
    return ok, f"B(2,2) -> {full}, sparse biquadratic -> {sparse}"


def check_pyramid(engine: str = "both") -> tuple[bool, str]:
    bad = []
    specs = [a for m in (1, 2, 3) for a in itertools.product((1, 2, 3), repeat=m)]
    for a in specs:
        got = pyramid_mv(a, engine=engine)
        if got != 1 + box_edd(a):
            bad.append((a, got))
    return not bad, f"{len(specs)} pyramids, mismatches={bad}"


def check_engines(per_m: int = 50, seed: int = 0) -> tuple[bool, str]:
    bad = []
    total = 0
    for m in (2, 3, 4):
        for k in range(per_m):
            rng = random.Random(f"engines:{seed}:{m}:{k}")
            polys = [random_polytope(rng, m, 4, m + 3, min_points=2) for _ in range(m)]
            o = mv_oracle(polys)
            c = mv_cells(polys, seed=k).value
            total += 1
            if o != c:
                bad.append((m, k, o, c))
    return not bad, f"{total} instances, mismatches={bad}"


def check_axioms(seed: int = 0, engine: str = "both") -> tuple[bool, str]:
    rng = random.Random(f"axioms:{seed}")
    failures = []

    def mv(polys):
        return mixed_volume(polys, engine=engine).value

    for m in (1, 2, 3):
        for _ in range(3):
            q = random_polytope(rng, m, 4, m + 3)
            if mv([q] * m) != factorial(m) * q.volume:
                failures.append(("normalization", q))
    base = [random_polytope(rng, 3, 3, 5) for _ in range(3)]
    ref = mv(base)
    for _ in range(20):
        perm = list(base)
        rng.shuffle(perm)
        if mv(perm) != ref:
            failures.append(("symmetry", perm))
    for _ in range(20):
        m = rng.choice((2, 3))
        q1, q1b = random_polytope(rng, m, 3, 4), random_polytope(rng, m, 3, 4)
        rest = [random_polytope(rng, m, 3, 4) for _ in range(m - 1)]
        if mv([minkowski_sum(q1, q1b)] + rest) != mv([q1] + rest) + mv([q1b] + rest):
            failures.append(("multiadditivity", q1, q1b, rest))
    checked = 0
    for m in (1, 2, 3):
        for _ in range(2):
            qs = [random_polytope(rng, m, 3, 4) for _ in range(m - 1)]
            for j in range(1, m + 1):
                for b in (1, 2, 3):
                    checked += 1
                    if mv(qs + [interval(m, b, j)]) != mv_interval_split(qs, b, j, engine=engine):
                        failures.append(("interval", qs, b, j))
    return not failures, f"normalization, 20 permutations, 20 triples, {checked} interval splits; failures={failures[:3]}"


def _grid_supports(seed: int) -> list[SupportSet]:
    rng = random.Random(f"grid:{seed}")
    return [random_support(rng, n, 3, 5) for n in (1, 2, 3) for _ in range(2)]


def check_euler(seeds: Sequence[int] = (0, 1, 2)) -> tuple[bool, str]:
    count = 0
    for s in seeds:
        for A in _grid_supports(s):
            f = random_general(A, s)
            for w in weight_grid(A.n):
                if not euler_witness(f, w).holds:
                    return False, f"identity fails for support {A.sorted_points()} and w={w}"
                count += 1
    return True, f"{count} (f, w) pairs"


def check_lemma_derivatives(seeds: Sequence[int] = (0, 1, 2)) -> tuple[bool, str]:
    count = 0
    for s in seeds:
        for A in _grid_supports(s):
            f = random_general(A, s)
            for w in weight_grid(A.n):
                face, h = exposed_face(A.points, w)
                fw = restrict_to_face(f, w)
                for i in range(1, A.n + 1):
                    dA = derivative_support(A, i)
                    if not dA:
                        continue
                    count += 1
                    dface, hi = exposed_face(dA.points, w)
                    if hi < h - w[i - 1]:
                        return False, f"h*_{i} < h* - w_i at {A.sorted_points()}, w={w}"
                    d_of_face = derivative_support(SupportSet(A.n, face), i)
                    if d_of_face:
                        if hi != h - w[i - 1] or d_of_face.points != dface:
                            return False, f"equality case fails at {A.sorted_points()}, w={w}, i={i}"
                        if derivative(fw, i) != restrict_to_face(derivative(f, i), w):
                            return False, f"d_i(f_w) != (d_i f)_w at {A.sorted_points()}, w={w}, i={i}"
    return True, f"{count} (A, w, i) triples"


def trapezoid_shape_check(seed: int = 0) -> tuple[bool, str]:
    """The weight classes of (v, w_1, w_2) = (0, 0, 1) and (1, 0, -1) carry the
    expected entry shapes and cases."""
    report = audit(TRAPEZOID, seed=seed)
    polys = [s.points for s in (build_supports(TRAPEZOID).P, *build_supports(TRAPEZOID).Pi)]
    expected = {
        (0, 0, 1): (Case.TriangularVzero, [Shape.DerivFull, Shape.DerivMinusLambdaU]),
        (1, 0, -1): (Case.Euler, [Shape.DerivOnly, Shape.DerivPlusLambdaX]),
    }
    notes = []
    ok = report.all_empty
    for w, (case, shapes) in expected.items():
        target = face_tuple(polys, w)
        reps = [c for c in report.classifications if face_tuple(polys, c.w) == target]
        if not reps:
            ok = False
            notes.append(f"no representative equivalent to {w}")
            continue
        got = reps[0]
        good = got.case is case and [s.kind for s in got.entry_shapes] == shapes
        ok &= good
        notes.append(f"{w}~{got.w}: {got.case.value if got.case else None}")
    direct = [classify_w(TRAPEZOID, w, seed) for w in expected]
    ok &= all(c.case is expected[c.w][0] for c in direct)
    return ok, ", ".join(notes)


def check_audit(seed: int = 0, random_count: int = 20) -> tuple[bool, str]:
    failures = []
    ok, note = trapezoid_shape_check(seed)
    if not ok:
        failures.append(("trapezoid", note))
    for a in itertools.product((1, 2), repeat=2):
        if not audit(BoxSpec(a).support(), seed=seed).all_empty:
            failures.append(("box", a))
    rng = random.Random(f"audit:{seed}")
    for k in range(random_count):
        A = random_support(rng, rng.randint(1, 3), 3, 6)
        rep = audit(A, seed=seed)
        if not rep.all_empty:
            failures.append(("random", A.sorted_points(), [c.w for c in rep.unclassified()]))
    return not failures, f"trapezoid [{note}], 4 boxes, {random_count} random supports; failures={failures}"


def check_path_count() -> tuple[bool, str]:
    cases = [build_supports(TRAPEZOID).polytopes(), build_supports(BoxSpec((2, 2)).support()).polytopes()]
    details = []
    for polys in cases:
        res = mv_cells(polys)
        if res.path_count != res.value or res.value != mv_oracle(polys):
            return False, f"path count {res.path_count} vs value {res.value}"
        details.append(str(res.value))
    return True, "path counts " + ", ".join(details) + " equal the mixed volumes (homotopy solving itself is out of scope)"


CRITERIA: list[tuple[int, str, Callable[[], tuple[bool, str]]]] = [
    (1, "box formula sweep", check_box_sweep),
    (2, "biquadratic consistency", check_biquadratic),
    (3, "pyramid lemma", check_pyramid),
    (4, "engine equivalence", check_engines),
    (5, "mixed-volume axioms", check_axioms),
    (6, "Euler identity", check_euler),
    (7, "derivative face lemma", check_lemma_derivatives),
    (8, "facial audit completeness", check_audit),
    (9, "path count equals mixed volume", check_path_count),
]


def run_criterion(number: int, **kwargs) -> CriterionResult:
    for num, name, fn in CRITERIA:
        if num == number:
            t = time.perf_counter()
            passed, detail = fn(**kwargs)
            return CriterionResult(num, name, passed, detail, time.perf_counter() - t)
    raise KeyError(f"no criterion {number}")


def run_all(
    quick: bool = False, engine: str = "both", echo: Callable[[str], None] | None = None
) -> list[CriterionResult]:
    results = []
    for num, _, fn in CRITERIA:
        kwargs = {}
        if "engine" in inspect.signature(fn).parameters:
            kwargs["engine"] = engine
        if quick and num == 1:
            kwargs["quick"] = True
        res = run_criterion(num, **kwargs)
        results.append(res)
        if echo:
            echo(res.line())
    return results
