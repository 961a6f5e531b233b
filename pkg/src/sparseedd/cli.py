"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 engine mismatch, 4 precondition
violation. A failed selftest exits with 1.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .edd import BoxSpec, box_edd, edd_bound
from .facial import PreconditionError, audit
from .lagrange import build_supports, build_system, random_general_u
from .lattice import DEFAULT_MAX_DIM, GeometryError, LatticePolytope
from .mixed_volume import ENGINES, EngineMismatchError, MixedVolumeInputError, mixed_volume
from .poly import SparsePolynomial, SupportSet, format_rational

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2
EXIT_MISMATCH = 3
EXIT_PRECONDITION = 4


class InputError(Exception):
    pass


def _load_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def load_support(path: str) -> SupportSet:
    data = _load_json(path)
    try:
        if isinstance(data, dict) and "terms" in data:
            return SparsePolynomial.from_dict(data).support
        if isinstance(data, list):
            return SupportSet.of(data)
        return SupportSet.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: not a support file ({exc})") from exc


def load_polytopes(path: str) -> list[LatticePolytope]:
    data = _load_json(path)
    items = data.get("polytopes") if isinstance(data, dict) else data
    if not isinstance(items, list):
        raise InputError(f"{path}: expected a list of polytopes or {{\"polytopes\": [...]}}")
    out = []
    for k, item in enumerate(items):
        try:
            out.append(LatticePolytope.from_dict(item) if isinstance(item, dict) else LatticePolytope(item))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{path}: polytope #{k}: {exc}") from exc
    return out


def _guard(dim: int, args) -> None:
    if dim > args.max_dim:
        raise InputError(f"ambient dimension {dim} exceeds --max-dim {args.max_dim}")


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2 if args.verbose else None, sort_keys=False))
    else:
        print(text)


def _header(args) -> str:
    return f"# engine={args.engine} seed={args.seed}"


def cmd_edd(args) -> int:
    A = load_support(args.support)
    _guard(A.n + 1, args)
    rep = edd_bound(A, engine=args.engine, seed=args.seed, workers=args.workers)
    lines = [_header(args), f"support: {len(A)} points in N^{A.n}", f"edd_value: {rep.edd_value} ({rep.status})"]
    if rep.closed_form is not None:
        lines.append(f"closed form for the box: {rep.closed_form}")
    lines += [f"warning: {w}" for w in rep.warnings]
    if args.verbose and rep.mv.cells is not None:
        lines.append(f"mixed cells: {len(rep.mv.cells)}, homotopy paths: {rep.mv.path_count}")
    _emit(args, rep.to_dict(), "\n".join(lines))
    return EXIT_OK


def cmd_box(args) -> int:
    try:
        spec = BoxSpec(tuple(args.a))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    value = box_edd(spec)
    _emit(args, {"a": list(spec.a), "edd_value": value}, str(value))
    return EXIT_OK


def cmd_mv(args) -> int:
    polys = load_polytopes(args.polytopes)
    if polys:
        _guard(polys[0].ambient_dim, args)
    res = mixed_volume(polys, engine=args.engine, seed=args.seed, workers=args.workers)
    lines = [_header(args), f"mixed volume: {res.value}"]
    if res.cells is not None:
        lines.append(f"mixed cells: {len(res.cells)}, homotopy paths: {res.path_count}")
        if args.verbose:
            lines += [f"  {c.edges} -> {c.volume}" for c in res.cells]
    _emit(args, res.to_dict(), "\n".join(lines))
    return EXIT_OK


def cmd_audit(args) -> int:
    A = load_support(args.support)
    _guard(A.n + 1, args)
    rep = audit(A, seed=args.seed, workers=args.workers, max_dim=args.max_dim)
    lines = [
        f"# seed={args.seed}",
        f"representatives: {len(rep.representatives)}",
        f"all_empty: {str(rep.all_empty).lower()}",
        "cases: " + ", ".join(f"{k}={v}" for k, v in rep.by_case().items()),
    ]
    shown = rep.classifications if args.verbose else rep.unclassified()
    for c in shown:
        shapes = ",".join(s.kind.value for s in c.entry_shapes)
        lines.append(f"  w={list(c.w)} h*={c.h_star} [{shapes}] -> {c.case.value if c.case else '-'} {c.verdict}")
    lines.append("note: verdicts hold for general f and u; no specific coefficients are certified")
    _emit(args, rep.to_dict(), "\n".join(lines))
    return EXIT_OK


def cmd_lagrange(args) -> int:
    data = _load_json(args.input)
    payload: dict = {}
    try:
        if isinstance(data, dict) and "terms" in data:
            f = SparsePolynomial.from_dict(data)
            if args.u:
                u = [s for s in args.u.split(",")]
            else:
                u = list(random_general_u(f.n, args.seed))
            system = build_system(f, u)
            A = f.support
            payload["system"] = system.to_dict()
        else:
            A = SupportSet.from_dict(data) if isinstance(data, dict) else SupportSet.of(data)
            system = None
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{args.input}: {exc}") from exc
    supports = build_supports(A)
    payload["supports"] = supports.to_dict()
    payload["warnings"] = list(supports.warnings)
    names = ["lambda"] + [f"x{i}" for i in range(1, A.n + 1)]
    lines = [f"P: {supports.P.sorted_points()}"]
    lines += [f"P{i}: {s.sorted_points()}" for i, s in enumerate(supports.Pi, 1)]
    if system is not None:
        lines.append("u = (" + ", ".join(format_rational(c) for c in system.u) + ")")
        lines += [f"entry {k}: {e.to_string(names)}" for k, e in enumerate(system.entries)]
    lines += [f"warning: {w}" for w in supports.warnings]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_all

    results = run_all(quick=args.quick, engine=args.engine, echo=None if args.json else print)
    ok = all(r.passed for r in results)
    if args.json:
        _emit(args, {"passed": ok, "criteria": [r.__dict__ for r in results]}, "")
    else:
        print(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
    return EXIT_OK if ok else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--engine", choices=ENGINES, default="both", help="mixed-volume engine (default: both, cross-checked)")
    common.add_argument("--seed", type=int, default=0, help="seed for liftings and random coefficients")
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--verbose", "-v", action="store_true")
    common.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM, help="refuse ambient dimensions above this")
    common.add_argument("--workers", type=int, default=None, help="process pool size for independent subtasks")

    parser = argparse.ArgumentParser(prog="sparseedd", description="Euclidean distance degree of sparse polynomials via mixed volumes")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("edd", parents=[common], help="EDD bound of a support file")
    p.add_argument("support")
    p.set_defaults(func=cmd_edd)

    p = sub.add_parser("box", parents=[common], help="closed-form EDD of a full box support")
    p.add_argument("a", type=int, nargs="+")
    p.set_defaults(func=cmd_box)

    p = sub.add_parser("mv", parents=[common], help="mixed volume of m polytopes in R^m")
    p.add_argument("polytopes")
    p.set_defaults(func=cmd_mv)

    p = sub.add_parser("audit", parents=[common], help="facial audit of the Lagrange system")
    p.add_argument("support")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("lagrange", parents=[common], help="Lagrange supports (and system, for a polynomial file)")
    p.add_argument("input")
    p.add_argument("--u", help="comma-separated rationals, e.g. 1/40,1/5 (default: seeded random)")
    p.set_defaults(func=cmd_lagrange)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance sweep")
    p.add_argument("--quick", action="store_true", help="skip the four-variable boxes")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except EngineMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except PreconditionError as exc:
        print(f"error: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (InputError, MixedVolumeInputError, GeometryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
