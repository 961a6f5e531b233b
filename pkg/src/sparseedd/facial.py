"""Facial audit of the Lagrange system.

For a weight w = (v, w_1, .., w_n) in Z^{n+1} (v weighs lambda), every entry
of the restricted system (L_{f,u})_w has one of seven shapes, decided by
h*_i = min over d_iA of w.a, by v and by w_i. On top of the shapes the
auditor runs a case analysis which, when it goes through, shows that the
restricted system has no solution with all coordinates nonzero for general f
and u. Anything that does not fit a case is reported as Unclassified; the
auditor never issues a certificate it cannot justify.

All verdicts are about general coefficients. Seeded random coefficients are
used only for spot checks (Euler identity, f_w(u_I) != 0), never as proof.
"""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .lagrange import build_supports, build_system, random_general_u
from .lattice import DEFAULT_MAX_DIM, GeometryError, Point, exposed_face, normal_representatives
from .poly import (
    SparsePolynomial,
    SupportSet,
    derivative,
    derivative_support,
    evaluate,
    format_rational,
    random_general,
    restrict_to_face,
)

EMPTY = "EmptyForGeneral"
UNCLASSIFIED = "Unclassified"

GENERIC_F = "coefficients of f are assumed to avoid a proper algebraic subset; not certified for any given f"
GENERIC_U = "u is assumed general; not certified for any given u"


class PreconditionError(ValueError):
    """The audit needs 0 in the support: without the constant term the argument fails."""


class Shape(enum.Enum):
    DerivOnly = "DerivOnly"                      # (d_i f)_w
    DerivFull = "DerivFull"                      # (d_i f)_w - lambda (u_i - x_i)
    DerivMinusLambdaU = "DerivMinusLambdaU"      # (d_i f)_w - lambda u_i
    DerivPlusLambdaX = "DerivPlusLambdaX"        # (d_i f)_w + lambda x_i
    LambdaAffine = "LambdaAffine"                # -lambda (u_i - x_i)
    LambdaUMonomial = "LambdaUMonomial"          # -lambda u_i
    LambdaXMonomial = "LambdaXMonomial"          # lambda x_i


class Case(enum.Enum):
    Constant = "Constant"
    MonomialEntry = "MonomialEntry"
    TriangularVneg = "TriangularVneg"
    TriangularVpos = "TriangularVpos"
    TriangularVzero = "TriangularVzero"
    Euler = "Euler"
    # some w_i < 0 on I but no entry keeps lambda*x_i: f_w and its I-derivatives vanish together
    SingularFace = "SingularFace"


def shape_conditions(h: int | None, v: int, wi: int) -> list[Shape]:
    """Every shape whose defining inequality holds; ``h`` None stands for +infinity
    (empty d_iA). Exactly one entry is expected."""
    inf = h is None
    lo = min(v, v + wi)
    out = []
    if not inf and h < lo:
        out.append(Shape.DerivOnly)
    if not inf and h == v and wi == 0:
        out.append(Shape.DerivFull)
    if not inf and h == v and wi > 0:
        out.append(Shape.DerivMinusLambdaU)
    if not inf and h == v + wi and wi < 0:
        out.append(Shape.DerivPlusLambdaX)
    if (inf or h > v) and wi == 0:
        out.append(Shape.LambdaAffine)
    if (inf or h > v) and wi > 0:
        out.append(Shape.LambdaUMonomial)
    if (inf or h > v + wi) and wi < 0:
        out.append(Shape.LambdaXMonomial)
    return out


@dataclass(frozen=True)
class EntryShape:
    i: int
    kind: Shape
    h_star_i: int | None  # None: d_iA is empty
    v: int
    w_i: int
    deriv_face: tuple[Point, ...] = ()  # (d_iA)_w, the surviving derivative exponents

    @property
    def keeps_derivative(self) -> bool:
        return self.kind in (Shape.DerivOnly, Shape.DerivFull, Shape.DerivMinusLambdaU, Shape.DerivPlusLambdaX)

    @property
    def is_monomial(self) -> bool:
        if self.kind in (Shape.LambdaUMonomial, Shape.LambdaXMonomial):
            return True
        return self.kind is Shape.DerivOnly and len(self.deriv_face) == 1

    def to_dict(self) -> dict:
        return {
            "i": self.i,
            "shape": self.kind.value,
            "h_star_i": self.h_star_i,
            "v": self.v,
            "w_i": self.w_i,
            "deriv_face": [list(p) for p in self.deriv_face],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "EntryShape":
        return cls(
            int(data["i"]),
            Shape(data["shape"]),
            data["h_star_i"],
            int(data["v"]),
            int(data["w_i"]),
            tuple(tuple(p) for p in data.get("deriv_face", ())),
        )


def _check_weight(A: SupportSet, w: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    if len(w) != A.n + 1:
        raise GeometryError(f"weight must have length n+1 = {A.n + 1}, got {len(w)}")
    if not any(w):
        raise GeometryError("the zero weight exposes no proper face")
    return int(w[0]), tuple(int(x) for x in w[1:])


def classify_entry(A: SupportSet, w: Sequence[int], i: int) -> EntryShape:
    """Shape of entry i (1..n) of (L_{f,u})_w."""
    v, wx = _check_weight(A, w)
    if not 1 <= i <= A.n:
        raise IndexError(f"entry index {i} outside 1..{A.n}")
    dA = derivative_support(A, i)
    if dA:
        face, h = exposed_face(dA.points, wx)
        face = tuple(sorted(face))
    else:
        face, h = (), None
    kinds = shape_conditions(h, v, wx[i - 1])
    if len(kinds) != 1:
        raise AssertionError(f"shape conditions not exclusive: {kinds} for h={h}, v={v}, w_i={wx[i - 1]}")
    return EntryShape(i, kinds[0], h, v, wx[i - 1], face)


@dataclass(frozen=True)
class FacialClassification:
    w: tuple[int, ...]
    h_star: int
    face: tuple[Point, ...]
    entry_shapes: tuple[EntryShape, ...]
    partition: dict = field(default_factory=dict, compare=False)
    case: Case | None = None
    verdict: str = UNCLASSIFIED
    witness: dict = field(default_factory=dict, compare=False)
    assumptions: tuple[str, ...] = ()

    @property
    def v(self) -> int:
        return self.w[0]

    def shape(self, i: int) -> Shape:
        return self.entry_shapes[i - 1].kind

    def to_dict(self) -> dict:
        return {
            "w": list(self.w),
            "h_star": self.h_star,
            "face": [list(p) for p in self.face],
            "entry_shapes": [s.to_dict() for s in self.entry_shapes],
            "partition": {k: list(v) for k, v in self.partition.items()},
            "case": None if self.case is None else self.case.value,
            "verdict": self.verdict,
            "witness": self.witness,
            "assumptions": list(self.assumptions),
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "FacialClassification":
        return cls(
            tuple(data["w"]),
            int(data["h_star"]),
            tuple(tuple(p) for p in data["face"]),
            tuple(EntryShape.from_dict(s) for s in data["entry_shapes"]),
            {k: tuple(v) for k, v in data.get("partition", {}).items()},
            None if data.get("case") is None else Case(data["case"]),
            data["verdict"],
            dict(data.get("witness", {})),
            tuple(data.get("assumptions", ())),
        )


def _unclassified(w, h, face, shapes, reason, partition=None) -> FacialClassification:
    return FacialClassification(
        tuple(w), h, face, shapes, partition or {}, None, UNCLASSIFIED, {"reason": reason}
    )


def _certified(w, h, face, shapes, partition, case, witness, assumptions=(GENERIC_F,)) -> FacialClassification:
    return FacialClassification(tuple(w), h, face, shapes, partition, case, EMPTY, witness, tuple(assumptions))


def classify_w(A: SupportSet, w: Sequence[int], seed: int = 0) -> FacialClassification:
    """Run the case analysis for one weight. ``seed`` drives the spot checks only."""
    v, wx = _check_weight(A, w)
    n = A.n
    face_set, h = exposed_face(A.points, wx)
    face = tuple(sorted(face_set))
    shapes = tuple(classify_entry(A, w, i) for i in range(1, n + 1))
    if not A.contains_origin:
        return _unclassified(w, h, face, shapes, "0 is not in the support; the case analysis needs the constant term")

    I = tuple(i for i in range(1, n + 1) if any(a[i - 1] > 0 for a in face))
    J = tuple(i for i in range(1, n + 1) if i not in I)
    part = {"I": I, "J": J}

    if not I:
        # f_w depends on no variable, so A_w = {0} and f_w is the nonzero constant term
        if face != (tuple([0] * n),):
            return _unclassified(w, h, face, shapes, "no variable survives but A_w is not {0}", part)
        return _certified(w, h, face, shapes, part, Case.Constant, {"f_w": "constant term of f"})

    if len(face) == 1:
        return _certified(w, h, face, shapes, part, Case.MonomialEntry, {"entry": 0, "term": list(face[0])})
    for s in shapes:
        if s.is_monomial:
            term = list(s.deriv_face[0]) if s.deriv_face and s.kind is Shape.DerivOnly else s.kind.value
            return _certified(w, h, face, shapes, part, Case.MonomialEntry, {"entry": s.i, "term": term})

    if all(wx[i - 1] >= 0 for i in I):
        return _case_two(A, w, v, wx, h, face, shapes, part, seed)
    return _case_three(A, w, v, wx, h, face, shapes, part, seed)


def _case_two(A, w, v, wx, h, face, shapes, part, seed) -> FacialClassification:
    n = A.n
    I, J = part["I"], part["J"]
    if any(wx[i - 1] != 0 for i in I) or h != 0 or tuple([0] * n) not in face:
        return _unclassified(w, h, face, shapes, "w_I >= 0 but not (w_I = 0, h* = 0, 0 in A_w)", part)

    if v < 0:
        if any(shapes[i - 1].kind is not Shape.LambdaAffine for i in I):
            return _unclassified(w, h, face, shapes, "v < 0 but an I-entry keeps its derivative", part)
        f = random_general(A, seed)
        u = random_general_u(n, seed)
        fw = restrict_to_face(f, wx)
        point = [u[k] if k + 1 in I else Fraction(1) for k in range(n)]
        value = evaluate(fw, point)
        witness = {
            "forced": "x_i = u_i for i in I",
            "seed": seed,
            "f_w_at_u_I": format_rational(value),
        }
        if value == 0:
            return _unclassified(w, h, face, shapes, f"f_w(u_I) = 0 for seed {seed}", part)
        return _certified(w, h, face, shapes, part, Case.TriangularVneg, witness, (GENERIC_F, GENERIC_U))

    if v > 0:
        if any(shapes[i - 1].kind is not Shape.DerivOnly for i in I):
            return _unclassified(w, h, face, shapes, "v > 0 but an I-entry keeps a lambda term", part)
        witness = {"subsystem": "f_w = d_i f_w = 0 for i in I", "contradiction": "V(f_w) would be singular in the torus"}
        return _certified(w, h, face, shapes, part, Case.TriangularVpos, witness)

    if any(shapes[i - 1].kind is not Shape.DerivFull for i in I):
        return _unclassified(w, h, face, shapes, "v = 0 but an I-entry is not d_i f_w - lambda(u_i - x_i)", part)
    K, M = [], []
    for j in J:
        s = shapes[j - 1]
        if s.h_star_i is not None and not s.h_star_i > -wx[j - 1]:
            return _unclassified(w, h, face, shapes, f"h*_{j} <= -w_{j}", part)
        if s.kind is Shape.LambdaAffine:
            K.append(j)
        elif s.kind is Shape.DerivMinusLambdaU:
            M.append(j)
        else:
            return _unclassified(w, h, face, shapes, f"J-entry {j} has shape {s.kind.value}", part)
    part = {**part, "K": tuple(K), "M": tuple(M)}
    if not M:
        return _unclassified(w, h, face, shapes, "v = 0 with M empty", part)
    for m in M:
        s = shapes[m - 1]
        if s.h_star_i != 0 or any(p[k - 1] for p in s.deriv_face for k in M):
            return _unclassified(w, h, face, shapes, f"(d_{m} f)_w involves x_M", part)
    witness = {
        "solve": "lambda, x_I from the I-subsystem; x_K = u_K",
        "contradiction": "(d_m f)_w is then a constant that must equal lambda*u_m for general u_m",
    }
    return _certified(w, h, face, shapes, part, Case.TriangularVzero, witness, (GENERIC_F, GENERIC_U))


def _case_three(A, w, v, wx, h, face, shapes, part, seed) -> FacialClassification:
    I = part["I"]
    K, M = [], []
    for i in I:
        s = shapes[i - 1]
        if s.kind is Shape.DerivOnly:
            K.append(i)
        elif s.kind is Shape.DerivPlusLambdaX:
            M.append(i)
        else:
            return _unclassified(w, h, face, shapes, f"some w_i < 0 on I but entry {i} has shape {s.kind.value}", part)
    part = {**part, "K": tuple(K), "M": tuple(M)}
    if not M:
        witness = {"subsystem": "f_w = d_i f_w = 0 for i in I", "contradiction": "V(f_w) would be singular in the torus"}
        return _certified(w, h, face, shapes, part, Case.SingularFace, witness)
    w_star = min(wx[i - 1] for i in I)
    for m in M:
        if wx[m - 1] != w_star or h != 2 * wx[m - 1] + v:
            return _unclassified(w, h, face, shapes, f"index {m} in M breaks w_m = w* or h* = 2 w_m + v", part)
    ident = euler_witness(restrict_to_face(random_general(A, seed), wx), wx)
    witness = {
        "h_star": h,
        "w_star": w_star,
        "identity": "h* f_w = sum_i w_i x_i d_i f_w",
        "identity_seed": seed,
        "identity_holds": ident.holds,
        "reduced": f"0 = -lambda * ({w_star}) * sum of x_m^2 over m in M",
        "contradiction": "V(f_w) would meet V(sum x_m^2) non-transversally",
    }
    if not ident.holds:
        return _unclassified(w, h, face, shapes, "Euler identity failed", part)
    return _certified(w, h, face, shapes, part, Case.Euler, witness)


@dataclass(frozen=True)
class EulerIdentity:
    w: tuple[int, ...]
    h_star: int
    lhs: SparsePolynomial
    rhs: SparsePolynomial

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def euler_witness(f: SparsePolynomial, w: Sequence[int]) -> EulerIdentity:
    """Both sides of h* f_w = sum_i w_i x_i d_i f_w, where h* is the minimum of w.a
    over the support of f. Raises ArithmeticError if they differ."""
    if len(w) != f.n:
        raise GeometryError(f"weight of length {len(w)} for a polynomial in {f.n} variables")
    w = tuple(int(x) for x in w)
    if f.is_zero():
        return EulerIdentity(w, 0, f, f)
    _, h = exposed_face(f.terms, w)
    fw = restrict_to_face(f, w)
    lhs = fw.scale(h)
    rhs = SparsePolynomial(f.n)
    for i in range(1, f.n + 1):
        if w[i - 1]:
            e = tuple(1 if k == i - 1 else 0 for k in range(f.n))
            rhs = rhs + derivative(fw, i).times_monomial(e, w[i - 1])
    out = EulerIdentity(w, h, lhs, rhs)
    if not out.holds:
        raise ArithmeticError(f"Euler identity fails for w={w}: {lhs} != {rhs}")
    return out


def facial_system(f: SparsePolynomial, u: Sequence, w: Sequence[int]) -> list[SparsePolynomial]:
    """The entries of (L_{f,u})_w as concrete polynomials in (lambda, x)."""
    return [restrict_to_face(e, w) for e in build_system(f, u).entries]


def audit_weights(A: SupportSet, max_dim: int = DEFAULT_MAX_DIM) -> list[tuple[int, ...]]:
    """Normal-fan representatives of the Lagrange polytopes plus all +-e_j."""
    polys = build_supports(A).polytopes()
    reps = set(normal_representatives(polys, max_dim=max_dim))
    m = A.n + 1
    for j in range(m):
        e = tuple(1 if k == j else 0 for k in range(m))
        reps.add(e)
        reps.add(tuple(-x for x in e))
    return sorted(reps)


@dataclass(frozen=True)
class FacialAuditReport:
    support: SupportSet
    representatives: tuple[tuple[int, ...], ...]
    classifications: tuple[FacialClassification, ...]
    seed: int = 0

    @property
    def all_empty(self) -> bool:
        return all(c.verdict == EMPTY for c in self.classifications)

    def unclassified(self) -> list[FacialClassification]:
        return [c for c in self.classifications if c.verdict != EMPTY]

    def by_case(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for c in self.classifications:
            key = c.case.value if c.case else UNCLASSIFIED
            out[key] = out.get(key, 0) + 1
        return dict(sorted(out.items()))

    def to_dict(self) -> dict:
        return {
            "support": self.support.to_dict(),
            "seed": self.seed,
            "all_empty": self.all_empty,
            "representatives": [list(w) for w in self.representatives],
            "classifications": [c.to_dict() for c in self.classifications],
            "genericity": [GENERIC_F, GENERIC_U],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "FacialAuditReport":
        return cls(
            SupportSet.from_dict(data["support"]),
            tuple(tuple(w) for w in data["representatives"]),
            tuple(FacialClassification.from_dict(c) for c in data["classifications"]),
            int(data.get("seed", 0)),
        )


def _classify_job(args):
    A, w, seed = args
    return classify_w(A, w, seed)


def audit(A: SupportSet, seed: int = 0, workers: int | None = None, max_dim: int = DEFAULT_MAX_DIM) -> FacialAuditReport:
    if not A.contains_origin:
        raise PreconditionError("0 must belong to the support for the emptiness argument")
    reps = audit_weights(A, max_dim=max_dim)
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_classify_job, [(A, w, seed) for w in reps]))
    else:
        results = [classify_w(A, w, seed) for w in reps]
    return FacialAuditReport(A, tuple(reps), tuple(results), seed)
