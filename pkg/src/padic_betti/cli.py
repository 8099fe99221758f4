"""Command line front end.

    padic-betti compute --space torus:2 --tower abelian:p=3,d=2 --betti 1
    padic-betti knot --delta "t^2-t+1" --m 6 --p 5
    padic-betti fab-torsion --matrix "1+25,5;5,1" --p 5 --precision 4 --levels 3
    padic-betti atiyah --matrix "t1-1" --d 1 --p 2 --field F3 --depth 3
    padic-betti frattini --group C8
    padic-betti --self-check

Every command prints a table by default or, with ``--format json``, one JSON
object {"input", "result", "checks"} with sorted keys and no floats.
"""

from __future__ import annotations

import argparse
import ast
import json
import operator
import os
import sys
from typing import Sequence

from . import complexes as cx
from .engine import FieldSpec, Request, approximate, euler_padic
from .groups import named_group, tower_from_spec
from .padic import GROWTH

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_GROWTH = 2


class CliError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# small parsers


_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Pow: operator.pow, ast.BitXor: operator.pow}


def int_expr(text: str) -> int:
    """Evaluate an integer expression built from literals, + - * and ^ or **."""
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        raise CliError(f"not an integer expression: {text!r}")
    try:
        return ev(ast.parse(text.strip(), mode="eval"))
    except SyntaxError:
        raise CliError(f"not an integer expression: {text!r}") from None


def parse_int_matrix(text: str) -> list[list[int]]:
    """Rows separated by ';', entries by ','; entries may be expressions like 1+25."""
    rows = [[int_expr(x) for x in r.split(",")] for r in text.split(";") if r.strip()]
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise CliError(f"malformed matrix {text!r}")
    return rows


def parse_kv(text: str) -> dict:
    out = {}
    for part in filter(None, (s.strip() for s in text.split(","))):
        if "=" not in part:
            raise CliError(f"expected key=value, got {part!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _split_args(text: str) -> list[str]:
    """Split 'a,b' at top-level commas."""
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    parts.append(cur)
    return [p.strip() for p in parts]


def build_space(text: str) -> cx.ChainComplexSpec:
    s = text.strip()
    for op, fn in (("wedge", cx.complex_wedge), ("product", cx.complex_product)):
        if s.startswith(op + "(") and s.endswith(")"):
            args = _split_args(s[len(op) + 1:-1])
            if len(args) != 2:
                raise CliError(f"{op} takes two spaces")
            return fn(build_space(args[0]), build_space(args[1]))
    kind, _, arg = s.partition(":")
    try:
        if kind == "torus":
            return cx.complex_torus(int(arg))
        if kind == "surface":
            return cx.complex_surface(int(arg))
        if kind == "free":
            return cx.complex_free(int(arg))
        if kind == "sphere":
            return cx.complex_sphere(int(arg))
        if kind == "circle":
            return cx.complex_circle(arg or "t")
        if kind == "point":
            return cx.complex_point()
        if kind == "klein":
            return cx.complex_klein_bottle()
        if kind == "knot":
            return cx.complex_knot(arg or "trefoil")
        if kind == "fab":
            return cx.fab_presentation(parse_int_matrix(arg))
        if kind in ("presentation", "complex", "file"):
            return cx.load_complex(arg)
    except ValueError as exc:
        raise CliError(f"space {text!r}: {exc}") from None
    raise CliError(f"unknown space {text!r}")


def build_tower(text: str, ngens: int, depth: int | None):
    if os.path.exists(text):
        with open(text) as fh:
            try:
                spec = json.load(fh)
            except json.JSONDecodeError as exc:
                raise CliError(f"{text}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    else:
        kind, _, rest = text.partition(":")
        spec = {"kind": kind.strip()}
        spec.update(parse_kv(rest))
        if spec["kind"] == "semidirect" and "matrix" in spec:
            spec["matrix"] = parse_int_matrix(spec["matrix"].replace("|", ";").replace("/", ","))
        if spec["kind"] == "line" and "omega" in spec:
            spec["omega"] = int_expr(spec["omega"])
    if depth is not None:
        spec["depth"] = depth
    if spec.get("kind") == "abelian" and "generator_images" not in spec:
        d = int(spec.get("d", ngens))
        m = int(spec.get("m", 1))
        if d != ngens:
            # the first d generators go to the standard basis, the rest to 0
            images = [[int(i == j) for j in range(d)] for i in range(ngens)]
            spec["generator_images"] = [[1] + v for v in images] if m > 1 else images
            spec["d"] = d
    if spec.get("kind") == "frattini" and "generator_images" not in spec and "group" in spec:
        G = named_group(spec["group"])
        if G.ngens != ngens:
            raise CliError(f"group {spec['group']} has {G.ngens} generators but the space has {ngens}")
    try:
        return tower_from_spec(spec, ngens)
    except (ValueError, TypeError) as exc:
        raise CliError(f"tower {text!r}: {exc}") from None


# ---------------------------------------------------------------------------
# output


def emit(args, inp: dict, result: dict, checks: dict, table: Sequence[str]) -> None:
    if args.format == "json":
        print(json.dumps({"input": inp, "result": result, "checks": checks}, sort_keys=True))
    else:
        for line in table:
            print(line)


def _fmt_approx(a: dict) -> str:
    if a["status"] != "converged":
        return a["status"]
    return f"{a['residue']} mod {a['p']}^{a['precision']}"


# ---------------------------------------------------------------------------
# commands


def cmd_compute(args) -> int:
    c = build_space(args.space)
    tower = build_tower(args.tower, c.ngens, args.max_level)
    p = tower.p if args.p is None else args.p
    field = FieldSpec.parse(args.field)
    inp = {"command": "compute", "space": args.space, "tower": args.tower, "p": p,
           "field": field.name, "precision": args.precision, "window": args.window,
           "max_level": args.max_level}
    if args.euler:
        req = Request("euler")
    elif args.torsion is not None:
        req = Request("torsion", args.torsion)
    else:
        req = Request("betti", 0 if args.betti is None else args.betti, field)
    seq = approximate(c, tower, req, p, args.precision, args.window, args.method)
    result = seq.to_json()
    checks = dict(seq.checks)
    if args.euler and c.complete:
        e = euler_padic(c, tower, p, args.precision, args.window, cross_check=args.cross_check,
                        method=args.method)
        checks["euler_limit"] = e.to_json()
    table = [f"{seq.kind} of {c.name} along {tower.description or args.tower} (p = {p})",
             "level  |Q|  value"]
    table += [f"{lv.n:5d}  {lv.order}  {lv.value}" for lv in seq.levels]
    table.append(f"limit: {_fmt_approx(seq.limit.to_json())}")
    emit(args, inp, result, checks, table)
    if args.strict and seq.limit.status == GROWTH:
        return EXIT_GROWTH
    return EXIT_OK


def cmd_knot(args) -> int:
    from .knots import count_roots_mu, knot_b1

    deltas = list(args.delta or [])
    if args.knot:
        deltas.append(cx.ALEXANDER_POLYNOMIALS[args.knot] if args.knot in cx.ALEXANDER_POLYNOMIALS
                      else _knot_delta(args.knot))
    if not deltas:
        raise CliError("give --delta or --knot")
    counts = [count_roots_mu(d, args.m, args.p) for d in deltas]
    b1 = knot_b1(deltas, args.m, args.p, require_unit_at_one=args.require_unit)
    inp = {"command": "knot", "delta": [str(d) for d in deltas], "m": args.m, "p": args.p}
    result = {"b1": b1, "roots": [{"count": r.count, "stabilized_at": r.stabilized_at,
                                   "witness_order": r.witness_order} for r in counts]}
    emit(args, inp, result, {}, [f"b1 = {b1}"] + [f"  {d}: {r.count} roots in mu({args.m}*{args.p}^oo)"
                                                  for d, r in zip(deltas, counts)])
    return EXIT_OK


def _knot_delta(name: str):
    aliases = {"trefoil": "3_1", "figure-eight": "4_1"}
    if name in aliases:
        return cx.ALEXANDER_POLYNOMIALS[aliases[name]]
    raise CliError(f"unknown knot {name!r}")


def cmd_fab_torsion(args) -> int:
    from .fab import FabGroupSpec, dual_route, log_limit_check

    A = parse_int_matrix(args.matrix)
    spec = FabGroupSpec.power_of(A, args.p) if args.power else FabGroupSpec(A, args.p)
    rep = dual_route(spec, args.precision, args.levels)
    residuals = [log_limit_check(spec.matrix, args.p, n, args.precision + args.levels + 2)
                 for n in range(1, args.levels + 1)]
    inp = {"command": "fab-torsion", "matrix": spec.matrix, "p": args.p,
           "precision": args.precision, "levels": args.levels}
    result = rep.to_json()
    checks = {"agrees": rep.agrees, "sign_stable": rep.checks["sign_stable"],
              "log_limit_valuations": residuals}
    cf = rep.closed_form.value
    table = [f"A = {spec.matrix}, p = {args.p}, epsilon = {rep.closed_form.epsilon}",
             f"closed form: {cf.residue} mod {args.p}^{cf.precision}"]
    table += [f"level {lv.n}: |det(A^(p^n) - 1)|_(p') = {lv.value}" for lv in rep.approx.levels]
    table.append(f"agreement mod {args.p}^{rep.agree_precision}: {'yes' if rep.agrees else 'no'}")
    emit(args, inp, result, checks, table)
    return EXIT_OK if rep.agrees else EXIT_ERROR


def _load_laurent_matrix(text: str, nvars: int, modulus: int):
    from .polys import parse_laurent

    names = [f"t{i + 1}" for i in range(nvars)]
    data = None
    if os.path.exists(text):
        with open(text) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise CliError(f"{text}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        rows = data["matrix"] if isinstance(data, dict) else data
    else:
        rows = [r.split(",") for r in text.split(";") if r.strip()]
    try:
        return [[parse_laurent(str(e), names=names, modulus=modulus) for e in r] for r in rows], data
    except ValueError as exc:
        raise CliError(f"matrix entry: {exc}") from None


def cmd_atiyah(args) -> int:
    from .atiyah import AtiyahInstance, atiyah_kernel_dim, minors_formula_check

    field = FieldSpec.parse(args.field)
    lam = parse_int_matrix(args.lambda_) if args.lambda_ else []
    d = args.d
    A, data = _load_laurent_matrix(args.matrix, d + len(lam), field.characteristic)
    if isinstance(data, dict):
        if "lambda" in data and not lam:
            lam = data["lambda"]
            A, _ = _load_laurent_matrix(args.matrix, d + len(lam), field.characteristic)
    inst = AtiyahInstance(A, d, lam, args.p, field, args.lambda_precision)
    res = atiyah_kernel_dim(inst, args.depth, args.precision, args.window)
    checks = dict(res.checks)
    if args.minors:
        mc = minors_formula_check(inst, args.depth)
        checks["minors_formula"] = {"ok": mc.ok, "levels": mc.levels}
    inp = {"command": "atiyah", "instance": inst.to_json(), "depth": args.depth}
    table = [f"level {N}: dim ker = {v}" for N, v in enumerate(res.dims, start=1)]
    table.append(f"limit: {_fmt_approx(res.limit.to_json())}")
    emit(args, inp, res.to_json(), checks, table)
    return EXIT_OK


def cmd_frattini(args) -> int:
    from .atiyah import verify_frattini_lemma
    from .groups import frattini_series

    G = named_group(args.group)
    p = args.p or _group_prime(G.order)
    series = frattini_series(G, p)
    result = {"length": len(series) - 1, "orders": [len(H) for H in series], "order": G.order}
    checks = {}
    if args.verify:
        checks["lemma"] = verify_frattini_lemma(G, p).checks
    inp = {"command": "frattini", "group": args.group, "p": p}
    emit(args, inp, result, checks, [f"F({args.group}) = {len(series) - 1}",
                                     "series orders: " + " > ".join(str(len(H)) for H in series)])
    return EXIT_OK


def _group_prime(n: int) -> int:
    from .arith import factorize

    f = factorize(n)
    if len(f) != 1:
        raise CliError(f"group order {n} is not a prime power; pass --p")
    return f[0][0]


def cmd_self_check(args) -> int:
    from .oracles import run_self_check

    reports = run_self_check(args.seed, args.count)
    bad = [r for r in reports if not r.agree]
    result = {"total": len(reports), "disagreements": [r.to_json() for r in bad]}
    emit(args, {"command": "self-check", "seed": args.seed, "count": args.count}, result,
         {"all_agree": not bad}, [f"{len(reports) - len(bad)}/{len(reports)} oracle comparisons agree"]
         + [f"  MISMATCH {r.quantity}: main {r.main} oracle {r.oracle}" for r in bad])
    return EXIT_OK if not bad else EXIT_ERROR


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="padic-betti", description="p-adic Betti numbers and torsion of finite covers")
    ap.add_argument("--self-check", action="store_true", help="run the oracle suite and exit")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--format", choices=["table", "json"], default="table")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp):
        sp.add_argument("--format", choices=["table", "json"], default=argparse.SUPPRESS)

    sp = sub.add_parser("compute", help="invariants along a tower")
    sp.add_argument("--space", required=True)
    sp.add_argument("--tower", required=True)
    what = sp.add_mutually_exclusive_group()
    what.add_argument("--betti", type=int)
    what.add_argument("--torsion", type=int)
    what.add_argument("--euler", action="store_true")
    sp.add_argument("--field", default="Q")
    sp.add_argument("--p", type=int)
    sp.add_argument("--precision", type=int, default=3)
    sp.add_argument("--window", type=int, default=3)
    sp.add_argument("--max-level", type=int)
    sp.add_argument("--method", choices=["auto", "characters", "direct"], default="auto")
    sp.add_argument("--strict", action="store_true", help="exit 2 when growth is detected")
    sp.add_argument("--no-cross-check", dest="cross_check", action="store_false")
    common(sp)
    sp.set_defaults(func=cmd_compute)

    sp = sub.add_parser("knot", help="b1 of cyclic covers of a knot complement")
    sp.add_argument("--delta", action="append")
    sp.add_argument("--knot")
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--require-unit", action="store_true", help="insist on |Delta(1)| = 1")
    common(sp)
    sp.set_defaults(func=cmd_knot)

    sp = sub.add_parser("fab-torsion", help="torsion of Z^N x|_A Z, both routes")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--precision", type=int, default=4)
    sp.add_argument("--levels", type=int, default=3)
    sp.add_argument("--power", action="store_true", help="replace A by A^e = 1 mod p")
    common(sp)
    sp.set_defaults(func=cmd_fab_torsion)

    sp = sub.add_parser("atiyah", help="kernel dimensions over (Z/p^N)^d")
    sp.add_argument("--matrix", required=True, help="JSON file or rows like 't1-1,0;0,t1+1'")
    sp.add_argument("--lambda", dest="lambda_", default="")
    sp.add_argument("--lambda-precision", type=int)
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--field", default="Q")
    sp.add_argument("--depth", type=int, default=3)
    sp.add_argument("--precision", type=int, default=3)
    sp.add_argument("--window", type=int, default=3)
    sp.add_argument("--minors", action="store_true", help="also run the minors formula check")
    common(sp)
    sp.set_defaults(func=cmd_atiyah)

    sp = sub.add_parser("frattini", help="Frattini series of a small p-group")
    sp.add_argument("--group", required=True)
    sp.add_argument("--p", type=int)
    sp.add_argument("--verify", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_frattini)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.self_check:
            return cmd_self_check(args)
        if not args.command:
            ap.print_usage(sys.stderr)
            return EXIT_ERROR
        return args.func(args)
    except (CliError, ValueError, AssertionError, OSError, KeyError) as exc:
        print(f"padic-betti: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
