import itertools
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparseedd.facial import (
    EMPTY,
    GENERIC_F,
    UNCLASSIFIED,
    Case,
    FacialAuditReport,
    FacialClassification,
    PreconditionError,
    Shape,
    audit,
    audit_weights,
    classify_entry,
    classify_w,
    euler_witness,
    facial_system,
    shape_conditions,
)
from sparseedd.lagrange import build_supports, random_general_u
from sparseedd.lattice import GeometryError, box_points, exposed_face
from sparseedd.poly import SparsePolynomial, SupportSet, derivative, random_general, restrict_to_face
from sparseedd.selftest import random_support

from conftest import TRAPEZOID_POINTS

TRAP = SupportSet.of(TRAPEZOID_POINTS)


def supports(n_max=3):
    return st.builds(
        lambda n, seed: random_support(random.Random(seed), n, 3, 6),
        st.integers(1, n_max),
        st.integers(0, 10**6),
    )


def weights(n, r=3):
    return st.tuples(*[st.integers(-r, r)] * (n + 1)).filter(any)


# ---- entry shapes


def test_shape_conditions_are_exclusive_and_exhaustive():
    for h in [None] + list(range(-6, 7)):
        for v, wi in itertools.product(range(-4, 5), repeat=2):
            assert len(shape_conditions(h, v, wi)) == 1, (h, v, wi)


def test_classify_entry_examples():
    # weight (v, w_1, w_2) = (0, 0, 1): d_1 A has h* = 0 = v and w_1 = 0
    assert classify_entry(TRAP, (0, 0, 1), 1).kind is Shape.DerivFull
    assert classify_entry(TRAP, (0, 0, 1), 2).kind is Shape.DerivMinusLambdaU
    assert classify_entry(TRAP, (1, 0, -1), 1).kind is Shape.DerivOnly
    assert classify_entry(TRAP, (1, 0, -1), 2).kind is Shape.DerivPlusLambdaX
    const = SupportSet.of([(0, 0)])
    assert classify_entry(const, (0, 0, 1), 1).kind is Shape.LambdaAffine
    assert classify_entry(const, (0, 1, 0), 1).kind is Shape.LambdaUMonomial
    assert classify_entry(const, (0, -1, 0), 1).kind is Shape.LambdaXMonomial
    assert classify_entry(const, (0, -1, 0), 1).h_star_i is None


def test_classify_entry_errors():
    with pytest.raises(IndexError):
        classify_entry(TRAP, (0, 0, 1), 3)
    with pytest.raises(GeometryError):
        classify_entry(TRAP, (0, 1), 1)
    with pytest.raises(GeometryError):
        classify_entry(TRAP, (0, 0, 0), 1)


def _expected_entry(kind, df_w, u_i, i, n):
    lam = tuple(1 if k == 0 else 0 for k in range(n + 1))
    lam_x = tuple(1 if k in (0, i) else 0 for k in range(n + 1))
    minus_lam_u = SparsePolynomial(n + 1, {lam: -u_i})
    plus_lam_x = SparsePolynomial(n + 1, {lam_x: 1})
    d = df_w.embed()
    return {
        Shape.DerivOnly: d,
        Shape.DerivFull: d + minus_lam_u + plus_lam_x,
        Shape.DerivMinusLambdaU: d + minus_lam_u,
        Shape.DerivPlusLambdaX: d + plus_lam_x,
        Shape.LambdaAffine: minus_lam_u + plus_lam_x,
        Shape.LambdaUMonomial: minus_lam_u,
        Shape.LambdaXMonomial: plus_lam_x,
    }[kind]


@given(supports(), st.data(), st.integers(0, 1000))
@settings(max_examples=60, deadline=None)
def test_shapes_describe_the_restricted_entries(A, data, seed):
    w = data.draw(weights(A.n))
    f = random_general(A, seed)
    u = random_general_u(A.n, seed)
    system = facial_system(f, u, w)
    assert system[0] == restrict_to_face(f, w[1:]).embed()
    for i in range(1, A.n + 1):
        s = classify_entry(A, w, i)
        df = derivative(f, i)
        df_w = restrict_to_face(df, w[1:]) if not df.is_zero() else df
        assert system[i] == _expected_entry(s.kind, df_w, u[i - 1], i, A.n)


# ---- classify_w


def test_trapezoid_reference_weights():
    c = classify_w(TRAP, (0, 0, 1))
    assert c.case is Case.TriangularVzero and c.verdict == EMPTY
    assert [s.kind for s in c.entry_shapes] == [Shape.DerivFull, Shape.DerivMinusLambdaU]
    assert c.partition["I"] == (1,) and c.partition["M"] == (2,)
    e = classify_w(TRAP, (1, 0, -1))
    assert e.case is Case.Euler and e.verdict == EMPTY
    assert [s.kind for s in e.entry_shapes] == [Shape.DerivOnly, Shape.DerivPlusLambdaX]
    assert e.partition["M"] == (2,) and e.witness["w_star"] == -1


def test_lambda_direction_is_triangular_positive():
    c = classify_w(TRAP, (1, 0, 0))
    assert c.case is Case.TriangularVpos
    assert all(s.kind is Shape.DerivOnly for s in c.entry_shapes)


def test_negative_lambda_direction():
    for seed in (0, 1, 2):
        c = classify_w(TRAP, (-1, 0, 0), seed)
        assert c.case is Case.TriangularVneg
        assert c.witness["f_w_at_u_I"] != "0"
        assert set(c.assumptions) == {GENERIC_F, "u is assumed general; not certified for any given u"}


def test_constant_case():
    c = classify_w(TRAP, (0, 1, 1))
    assert c.case is Case.Constant and c.face == ((0, 0),)


def test_no_origin_is_unclassified():
    c = classify_w(SupportSet.of([(1, 0), (0, 1)]), (0, 1, 0))
    assert c.verdict == UNCLASSIFIED and c.case is None


@given(supports(), st.data(), st.integers(0, 1000))
@settings(max_examples=60, deadline=None)
def test_certificates_are_consistent(A, data, seed):
    w = data.draw(weights(A.n))
    c = classify_w(A, w, seed)
    f = random_general(A, seed)
    system = facial_system(f, random_general_u(A.n, seed), w)
    if c.verdict == EMPTY:
        assert GENERIC_F in c.assumptions
    if c.case is Case.Constant:
        assert len(system[0]) == 1 and system[0].support.points == {(0,) * (A.n + 1)}
    if c.case is Case.MonomialEntry:
        assert len(system[c.witness["entry"]]) == 1
    if c.case is Case.Euler:
        M = c.partition["M"]
        assert M
        w_star = min(w[i] for i in c.partition["I"])
        assert all(w[m] == w_star for m in M)
        assert c.h_star == 2 * w_star + w[0]
    if c.case in (Case.TriangularVneg, Case.TriangularVpos, Case.TriangularVzero):
        assert all(w[i] == 0 for i in c.partition["I"]) and c.h_star == 0


# ---- euler_witness


def test_euler_witness_examples():
    f = SparsePolynomial(2, {(2, 2): 1, (2, 0): -3, (0, 2): -3, (0, 0): 5})
    e = euler_witness(f, (1, 1))
    assert e.holds and e.h_star == 0 and e.lhs.is_zero()
    e = euler_witness(f, (-1, -1))
    assert e.h_star == -4 and e.lhs == SparsePolynomial(2, {(2, 2): -4})
    assert euler_witness(SparsePolynomial(2), (1, 0)).holds
    with pytest.raises(GeometryError):
        euler_witness(f, (1,))


def test_euler_witness_trapezoid_and_trivial_weights():
    f = random_general(TRAP, 0)
    e = euler_witness(f, (0, -1))
    fw = restrict_to_face(f, (0, -1))
    assert e.h_star == -1 and e.lhs == fw.scale(-1)
    assert fw.support.points == {(0, 1), (1, 1), (2, 1)}
    zero = euler_witness(f, (0, 0))
    assert zero.h_star == 0 and zero.lhs.is_zero() and zero.rhs.is_zero()


@given(st.tuples(st.integers(0, 4), st.integers(0, 4)), st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_euler_witness_monomial(a, w):
    f = SparsePolynomial(2, {a: "3/7"})
    e = euler_witness(f, w)
    expected = f.scale(w[0] * a[0] + w[1] * a[1])
    assert e.lhs == e.rhs == expected


@given(supports(), st.data(), st.integers(0, 1000))
@settings(max_examples=40, deadline=None)
def test_euler_identity_holds(A, data, seed):
    w = data.draw(st.tuples(*[st.integers(-3, 3)] * A.n))
    assert euler_witness(random_general(A, seed), w).holds


# ---- audit


def test_audit_trapezoid():
    rep = audit(TRAP)
    assert rep.all_empty and not rep.unclassified()
    assert {Case.TriangularVzero.value, Case.Euler.value} <= set(rep.by_case())
    m = 3
    for j in range(m):
        e = tuple(int(k == j) for k in range(m))
        assert e in rep.representatives and tuple(-x for x in e) in rep.representatives


def test_audit_constant_support():
    rep = audit(SupportSet.of([(0, 0)]))
    assert rep.all_empty
    assert Case.Constant.value in rep.by_case()


@pytest.mark.parametrize("a", [(1, 1), (2, 1), (2, 2), (1, 1, 1)])
def test_audit_boxes(a):
    assert audit(SupportSet.of(box_points(a))).all_empty


def test_audit_representatives_cover_all_weights():
    reps = audit_weights(TRAP)
    P = [s.points for s in (build_supports(TRAP).P, *build_supports(TRAP).Pi)]
    seen = {tuple(frozenset(exposed_face(q, r)[0]) for q in P) for r in reps}
    for w in itertools.product(range(-3, 4), repeat=3):
        if any(w):
            assert tuple(frozenset(exposed_face(q, w)[0]) for q in P) in seen


def test_audit_needs_origin():
    with pytest.raises(PreconditionError):
        audit(SupportSet.of([(1, 0), (0, 1)]))


def test_audit_workers_match():
    assert audit(TRAP, workers=2) == audit(TRAP)


def test_report_json_round_trip():
    rep = audit(TRAP, seed=4)
    data = json.loads(json.dumps(rep.to_dict()))
    assert data["all_empty"] is True
    back = FacialAuditReport.from_dict(data)
    assert back == rep
    for c in rep.classifications:
        again = FacialClassification.from_dict(json.loads(json.dumps(c.to_dict())))
        assert again.witness == c.witness and again.partition == c.partition
