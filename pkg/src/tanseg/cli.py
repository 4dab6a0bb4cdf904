"""Command-line interface: JSON in, JSON out, explicit seeds.

Exit codes: 0 success (or member / equal), 1 negative verdict, 2 error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Any

from . import __version__
from .core import DEFAULT_HEIGHT, HyperTensor, TensorError, random_rational, random_tensor, segre_point, tangent_point
from .membership import (
    MembershipError,
    is_on_principal_minor_variety,
    is_on_tangential,
    module_basis,
    randomized_orbit_vanishing,
    tangential_generators,
)
from .minors import (
    HomogenizedMatrix,
    MatrixError,
    SymMatrix,
    all_minors_vector,
    e_minors,
    erank,
    principal_minor_map,
    random_erank_le1,
    random_symmetric,
)
from .oracle import OracleError, compare_zero_sets_matrix, compare_zero_sets_uvw
from .poly import PolyError, SparsePoly, eval_on_tensor, pullback, specialize_t
from .schur import ModuleError, wedge_quadric


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _dump(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2)


def _load(path: str) -> dict:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _load_matrix(path: str, t: str | None) -> HomogenizedMatrix:
    obj = _load(path)
    if t is not None:
        obj = {**obj, "t": t}
    return HomogenizedMatrix.from_json(obj)


def _load_point(path: str, t: str | None, backend: str = "schur") -> HyperTensor:
    """A tensor JSON, or a matrix JSON mapped through the principal minor map."""
    obj = _load(path)
    if "entries" in obj:
        if t is not None:
            obj = {**obj, "t": t}
        return principal_minor_map(HomogenizedMatrix.from_json(obj), backend)
    return HyperTensor.from_json(obj)


# ---------------------------------------------------------------------------
# subcommands (each returns (exit code, JSON-able payload))


def cmd_phi(args):
    M = _load_matrix(args.matrix, args.t)
    return 0, principal_minor_map(M, args.backend).to_json()


def cmd_minors(args):
    M = _load_matrix(args.matrix, args.t)
    if args.exclusive is not None:
        items = e_minors(M.matrix, args.exclusive)
        return 0, {"n": M.n, "k": args.exclusive,
                   "e_minors": [{"rows": str(I), "cols": str(J), "value": str(v)} for (I, J), v in items]}
    return 0, all_minors_vector(M).to_json()


def cmd_erank(args):
    M = _load_matrix(args.matrix, args.t)
    return 0, {"n": M.n, **erank(M.matrix).to_json()}


def cmd_sample(args):
    rng = random.Random(args.seed)
    n, h = args.n, args.height
    kind = args.kind
    if kind == "erank1":
        out = random_erank_le1(rng, n, h).to_json()
    elif kind == "symmetric":
        out = HomogenizedMatrix(random_symmetric(rng, n, h), Fraction(args.t or 1)).to_json()
    elif kind == "diagonal":
        A = SymMatrix.diagonal([random_rational(rng, h) for _ in range(n)])
        out = HomogenizedMatrix(A, Fraction(args.t or 1)).to_json()
    elif kind == "segre":
        out = segre_point([(random_rational(rng, h, True), random_rational(rng, h)) for _ in range(n)]).to_json()
    elif kind == "tangent":
        base = [(Fraction(1), random_rational(rng, h)) for _ in range(n)]
        dirs = [(Fraction(0), random_rational(rng, h, True)) for _ in range(n)]
        out = tangent_point(base, dirs, [random_rational(rng, h) for _ in range(n + 1)]).to_json()
    elif kind == "tensor":
        out = random_tensor(rng, n, h).to_json()
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown sample kind {kind}")
    out["kind"] = kind
    out["seed"] = args.seed
    return 0, out


def _module_polys(family: str, n: int) -> list[SparsePoly]:
    if family == "wedge":
        return [wedge_quadric(n)]
    return module_basis(family, n).polys


def cmd_gen_module(args):
    if args.family == "wedge":
        f = wedge_quadric(args.n)
        return 0, {"spec": {"n": args.n, "family": "wedge", "d": 2}, "dimension": 1, "polys": [f.to_json()]}
    basis = module_basis(args.family, args.n)
    out = basis.to_json()
    out["spec"]["family"] = args.family
    return 0, out


def _load_poly(args) -> SparsePoly:
    if args.poly:
        return SparsePoly.from_json(_load(args.poly))
    if args.family:
        polys = _module_polys(args.family, args.n)
        if not 0 <= args.index < len(polys):
            raise UsageError(f"--index must lie in [0, {len(polys)})")
        return polys[args.index]
    raise UsageError("give --poly FILE or --family with --n and --index")


def cmd_pullback(args):
    f = _load_poly(args)
    g = pullback(f)
    if args.t is not None:
        g = specialize_t(g, Fraction(args.t))
    return 0, g.to_json()


def cmd_eval(args):
    f = _load_poly(args)
    z = _load_point(args.point, args.t)
    return 0, {"value": str(eval_on_tensor(f, z))}


def cmd_member(args):
    z = _load_point(args.point, args.t)
    if args.variety == "principal_minors":
        report = is_on_principal_minor_variety(z)
    else:
        report = is_on_tangential(z, with_quadric=args.with_quadric)
    return (0 if report.member else 1), report.to_json()


def cmd_orbit_test(args):
    z = _load_point(args.point, args.t)
    polys = [_load_poly(args)] if (args.poly or args.family) else tangential_generators(z.n)
    report = randomized_orbit_vanishing(polys, z, trials=args.trials, seed=args.seed)
    out = report.to_json()
    out["seed"] = args.seed
    out["trials"] = args.trials
    return (0 if report.member else 1), out


def cmd_oracle(args):
    kw = {"jobs": args.jobs}
    if args.budget_seconds is not None:
        kw["budget_seconds"] = args.budget_seconds
    if args.system == "uvw":
        report = compare_zero_sets_uvw(args.p, **kw)
    else:
        exclude: list[int] = []
        if args.exclude_copy is not None:
            exclude = module_basis("cubic", 4).copy_indices(args.exclude_copy)
        report = compare_zero_sets_matrix(args.p, exclude=exclude, **kw)
    return (0 if report.verdict == "equal" else 1), report.to_json()


def cmd_reproduce(args):
    from .reproduce import run_suite

    manifest = run_suite(full=args.full, seed=args.seed)
    failed = [c["name"] for c in manifest["checks"] if c["status"] != "PASS"]
    return (1 if failed else 0), manifest


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tanseg", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_t(sp):
        sp.add_argument("--t", default=None, help="homogenizing scalar (overrides the JSON value; default 1)")

    def with_poly(sp):
        sp.add_argument("--poly", help="polynomial JSON file")
        sp.add_argument("--family", choices=["hd", "cubic", "wedge"], help="take a generated module element")
        sp.add_argument("--n", type=int, default=4)
        sp.add_argument("--index", type=int, default=0)

    sp = sub.add_parser("phi", help="principal minor map of a matrix")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--backend", choices=["schur", "naive"], default="schur")
    with_t(sp)
    sp.set_defaults(func=cmd_phi)

    sp = sub.add_parser("minors", help="all non-redundant minors, or exclusive minors of one size")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--exclusive", type=int, metavar="K")
    with_t(sp)
    sp.set_defaults(func=cmd_minors)

    sp = sub.add_parser("erank", help="exclusive rank with a witness minor")
    sp.add_argument("--matrix", required=True)
    with_t(sp)
    sp.set_defaults(func=cmd_erank)

    sp = sub.add_parser("sample", help="seeded random matrix or tensor")
    sp.add_argument("--kind", required=True,
                    choices=["erank1", "symmetric", "diagonal", "segre", "tangent", "tensor"])
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--height", type=int, default=DEFAULT_HEIGHT)
    with_t(sp)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("gen-module", help="generate a module basis")
    sp.add_argument("--family", choices=["hd", "cubic", "wedge"], required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_gen_module)

    sp = sub.add_parser("pullback", help="substitute principal minors into a polynomial")
    with_poly(sp)
    with_t(sp)
    sp.set_defaults(func=cmd_pullback)

    sp = sub.add_parser("eval", help="evaluate a polynomial at a tensor (or at phi of a matrix)")
    with_poly(sp)
    sp.add_argument("--point", required=True, help="tensor or matrix JSON")
    with_t(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("member", help="membership in the principal minor or tangential variety")
    sp.add_argument("point", nargs="?", default="-", help="tensor or matrix JSON (default: stdin)")
    sp.add_argument("--variety", choices=["principal_minors", "tangential"], default="tangential")
    sp.add_argument("--with-quadric", action="store_true", help="also test the n=4 wedge quadric")
    with_t(sp)
    sp.set_defaults(func=cmd_member)

    sp = sub.add_parser("orbit-test", help="randomized orbit evaluation")
    sp.add_argument("point", nargs="?", default="-")
    with_poly(sp)
    sp.add_argument("--trials", type=int, default=64)
    sp.add_argument("--seed", type=int, default=0)
    with_t(sp)
    sp.set_defaults(func=cmd_orbit_test)

    sp = sub.add_parser("oracle", help="finite-field zero-set comparison")
    sp.add_argument("system", choices=["uvw", "matrix"])
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--budget-seconds", type=float)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--exclude-copy", type=int, choices=[0, 1, 2],
                    help="matrix oracle: drop the elements generated by one highest weight vector")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("reproduce", help="run the reference-identity suite and print a manifest")
    sp.add_argument("--full", action="store_true", help="include the slow sampling and F_5 enumeration")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_reproduce)
    return p


_ERRORS = (UsageError, TensorError, MatrixError, PolyError, ModuleError, MembershipError, OracleError,
           ValueError, KeyError)


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        code, payload = args.func(args)
    except _ERRORS as exc:
        kind = "usage" if isinstance(exc, UsageError) else type(exc).__name__
        print(_dump({"error": {"type": kind, "message": str(exc)}}))
        return 2
    print(_dump(payload))
    return code


if __name__ == "__main__":
    sys.exit(main())
