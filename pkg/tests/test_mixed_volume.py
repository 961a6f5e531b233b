import importlib
import json
import random
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparseedd.lagrange import build_supports
from sparseedd.lattice import LatticePolytope, box, minkowski_sum
from sparseedd.mixed_volume import (
    DegenerateLiftingError,
    EngineMismatchError,
    MixedVolumeInputError,
    MixedVolumeResult,
    feasible,
    interval,
    mixed_volume,
    mv_cells,
    mv_interval_split,
    mv_oracle,
)
from sparseedd.poly import SupportSet

from conftest import TRAPEZOID_POINTS, polytopes, scipy_mixed_volume

ENGINES = ["oracle", "cells", "both"]


def mv(polys, engine="both", **kw):
    return mixed_volume(polys, engine=engine, **kw).value


# ---- examples


@pytest.mark.parametrize("engine", ENGINES)
def test_examples(engine):
    B = box((2, 2))
    assert mv([B, B], engine) == 8
    e1 = LatticePolytope([(0, 0), (1, 0)])
    e2 = LatticePolytope([(0, 0), (0, 1)])
    assert mv([e1, e2], engine) == 1
    assert mv([e1, e1], engine) == 0
    assert mv([LatticePolytope([(1, 1)]), B], engine) == 0
    assert mv([LatticePolytope([(0,), (5,)])], engine) == 5


def test_interval_split_example():
    B = box((1, 1, 1))
    assert mv_interval_split([B, B], 2, 3) == 4
    assert mv([B, B, interval(3, 2, 3)]) == 4


def test_interval_split_in_one_dimension():
    assert mv_interval_split([], 3, 1) == 3
    assert mv([interval(1, 3, 1)]) == 3


def test_trapezoid_lagrange_mixed_volume():
    polys = build_supports(SupportSet.of(TRAPEZOID_POINTS)).polytopes()
    assert scipy_mixed_volume(polys) == 7
    assert mv(polys) == 7


# ---- agreement with an independent floating-point oracle


@pytest.mark.parametrize("m", [2, 3, 4])
def test_engines_match_scipy(m):
    rng = random.Random(f"scipy:{m}")
    for k in range(6):
        polys = [LatticePolytope([tuple(rng.randint(0, 3) for _ in range(m)) for _ in range(m + 2)]) for _ in range(m)]
        ref = scipy_mixed_volume(polys)
        assert mv_oracle(polys) == ref
        assert mv_cells(polys, seed=k).value == ref


@given(st.lists(polytopes(2, 4), min_size=2, max_size=2), st.integers(0, 100))
@settings(max_examples=40, deadline=None)
def test_cells_equals_oracle_plane(polys, seed):
    assert mv_cells(polys, seed=seed).value == mv_oracle(polys)


@given(st.lists(polytopes(3, 3), min_size=3, max_size=3), st.integers(0, 100))
@settings(max_examples=25, deadline=None)
def test_cells_equals_oracle_space(polys, seed):
    assert mv_cells(polys, seed=seed).value == mv_oracle(polys)


# ---- axioms


@given(polytopes(2, 4))
@settings(max_examples=30, deadline=None)
def test_normalization(q):
    assert mv([q, q]) == factorial(2) * q.volume == q.normalized_volume


@given(st.lists(polytopes(3, 3), min_size=3, max_size=3), st.permutations(range(3)))
@settings(max_examples=20, deadline=None)
def test_symmetry(polys, perm):
    assert mv([polys[k] for k in perm]) == mv(polys)


@given(polytopes(2, 3), polytopes(2, 3), polytopes(2, 3))
@settings(max_examples=30, deadline=None)
def test_multiadditivity(a, b, c):
    assert mv([minkowski_sum(a, b), c]) == mv([a, c]) + mv([b, c])


@given(st.lists(polytopes(3, 3), min_size=3, max_size=3), st.tuples(*[st.integers(-3, 3)] * 3))
@settings(max_examples=20, deadline=None)
def test_translation_invariance(polys, t):
    shifted = LatticePolytope([tuple(x + y + 3 for x, y in zip(p, t)) for p in polys[0].vertices])
    assert mv([shifted] + polys[1:]) == mv(polys)


@given(st.lists(polytopes(3, 3), min_size=2, max_size=2), st.integers(1, 3), st.integers(1, 3))
@settings(max_examples=20, deadline=None)
def test_interval_split(polys, b, j):
    assert mv(polys + [interval(3, b, j)]) == mv_interval_split(polys, b, j)


@given(polytopes(2, 3), polytopes(2, 3))
@settings(max_examples=20, deadline=None)
def test_monotone(a, b):
    c = LatticePolytope(list(a.vertices) + [(0, 0), (4, 4)])
    assert mv([c, b]) >= mv([a, b]) >= 0


# ---- certificate and results


def test_cells_certificate():
    polys = build_supports(SupportSet.of(TRAPEZOID_POINTS)).polytopes()
    res = mv_cells(polys, seed=3)
    assert res.path_count == res.value == 7
    assert res.seed is not None and res.seed >= 3
    for cell in res.cells:
        assert len(cell.edges) == 3 and cell.volume > 0
        for (a, b), q in zip(cell.edges, polys):
            assert a in q.vertices and b in q.vertices


def test_cells_are_deterministic_per_seed():
    polys = [box((2, 1, 1)), box((1, 2, 1)), LatticePolytope([(0, 0, 0), (1, 1, 2), (2, 0, 1)])]
    assert mv_cells(polys, seed=5) == mv_cells(polys, seed=5)


def test_workers_do_not_change_results():
    polys = build_supports(SupportSet.of(TRAPEZOID_POINTS)).polytopes()
    assert mv_oracle(polys, workers=2) == mv_oracle(polys)
    assert mv_cells(polys, seed=1, workers=2) == mv_cells(polys, seed=1)


def test_result_json_round_trip():
    polys = [box((2, 2)), box((1, 3))]
    for engine in ENGINES:
        res = mixed_volume(polys, engine=engine)
        back = MixedVolumeResult.from_dict(json.loads(json.dumps(res.to_dict())))
        assert back == res
        assert (back.cells is None) == (engine == "oracle")


# ---- errors


def test_input_errors():
    with pytest.raises(MixedVolumeInputError):
        mixed_volume([])
    with pytest.raises(MixedVolumeInputError):
        mixed_volume([box((1, 1)), box((1, 1, 1))])
    with pytest.raises(MixedVolumeInputError):
        mixed_volume([box((1, 1, 1))] * 2)
    with pytest.raises(ValueError):
        mixed_volume([box((1, 1))] * 2, engine="fast")
    with pytest.raises(MixedVolumeInputError):
        mv_interval_split([box((1, 1))], 1, 3)
    with pytest.raises(ValueError):
        mv_interval_split([box((1, 1))], 0, 1)


def test_mismatch_is_raised(monkeypatch):
    mvmod = importlib.import_module("sparseedd.mixed_volume")

    monkeypatch.setattr(mvmod, "mv_oracle", lambda polys, workers=None: 99)
    with pytest.raises(EngineMismatchError) as info:
        mixed_volume([box((1, 1))] * 2)
    assert info.value.oracle == 99 and info.value.cells == 2


def test_degenerate_lifting_gives_up(monkeypatch):
    mvmod = importlib.import_module("sparseedd.mixed_volume")

    def always(polys, seed, workers):
        raise mvmod._Degenerate("forced")

    monkeypatch.setattr(mvmod, "_cells_once", always)
    with pytest.raises(DegenerateLiftingError):
        mv_cells([box((1, 1))] * 2, max_retries=2)


# ---- exact LP


def test_feasible_examples():
    # 0 <= x <= 1, 0 <= y <= 1
    square = [((1, 0), 1), ((-1, 0), 0), ((0, 1), 1), ((0, -1), 0)]
    assert feasible(square, 2)
    assert not feasible(square + [((1, 1), -1)], 2)
    # x + y <= 0, -x - y <= 0: a line, still nonempty
    assert feasible([((1, 1), 0), ((-1, -1), 0)], 2)
    # x >= 1/2, 2x <= 1: a single rational point
    assert feasible([((-2,), -1), ((2,), 1)], 1)
    assert not feasible([((-2,), -2), ((2,), 1)], 1)
    assert feasible([], 3)


@given(st.lists(st.tuples(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), st.integers(-3, 3)), max_size=6), st.integers(0, 5))
@settings(max_examples=60, deadline=None)
def test_feasible_matches_scipy(rows, seed):
    from scipy.optimize import linprog

    got = feasible(rows, 2, seed=seed)
    if not rows:
        assert got
        return
    res = linprog([0, 0], A_ub=[r[0] for r in rows], b_ub=[r[1] for r in rows], bounds=[(None, None)] * 2, method="highs")
    assert got == (res.status == 0)
