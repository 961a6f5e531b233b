import itertools
from math import factorial

import numpy as np
import pytest
from hypothesis import strategies as st
from scipy.spatial import ConvexHull, QhullError

from sparseedd.lattice import LatticePolytope
from sparseedd.poly import SupportSet

TRAPEZOID_POINTS = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1)]


@pytest.fixture
def trapezoid():
    return SupportSet.of(TRAPEZOID_POINTS)


def scipy_normalized_volume(points):
    """Independent float volume from qhull, scaled by m! and rounded."""
    pts = np.array(sorted(set(map(tuple, points))), dtype=float)
    m = pts.shape[1]
    if len(pts) <= m:
        return 0
    if m == 1:
        return int(round(pts.max() - pts.min()))
    try:
        vol = ConvexHull(pts).volume
    except QhullError:
        return 0
    return int(round(vol * factorial(m)))


def scipy_mixed_volume(polys):
    """Inclusion-exclusion over subset sums, with every volume taken from qhull."""
    m = len(polys)
    total = 0
    for r in range(1, m + 1):
        for subset in itertools.combinations(polys, r):
            pts = [tuple(0 for _ in range(m))]
            for q in subset:
                pts = list({tuple(a + b for a, b in zip(p, v)) for p in pts for v in q.vertices})
            total += (-1) ** (m - r) * scipy_normalized_volume(pts)
    assert total % factorial(m) == 0
    return total // factorial(m)


def point_sets(m, max_coord=3, min_size=1, max_size=6):
    pt = st.tuples(*[st.integers(0, max_coord)] * m)
    return st.lists(pt, min_size=min_size, max_size=max_size)


def polytopes(m, max_coord=3, min_size=1, max_size=6):
    return point_sets(m, max_coord, min_size, max_size).map(LatticePolytope)


#: one line per acceptance criterion, echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
