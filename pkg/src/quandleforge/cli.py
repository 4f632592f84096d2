"""``quandleforge`` command line.

Exit status: 0 success, 1 verification failure, 2 usage or input error.
All inputs are parsed and validated before anything is computed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import config
from .core import dihedral_quandle, enumerate_quandles, parse_table, trivial_quandle
from .laurent import describe_module, matrix_reduce
from .pquandle import default_model
from .terms import (
    HnnData,
    ParseError,
    PresentationError,
    alexander_matrix,
    eval_term,
    hnn_extend,
    hom_count,
    leaves,
    parse_presentation,
    parse_tau,
    parse_term,
)


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def load_presentation(path: str):
    try:
        return parse_presentation(_read(path))
    except ParseError as e:
        raise UsageError(f"{path}: {e}") from None


def load_model(spec: str):
    kind, sep, arg = spec.partition(":")
    if not sep:
        raise UsageError(f"model must be trivial:N, dihedral:N or table:FILE, got {spec!r}")
    if kind in ("trivial", "dihedral"):
        if not arg.isdigit() or int(arg) < 1:
            raise UsageError(f"bad model order {arg!r}")
        n = int(arg)
        if n > config.order_cap():
            raise UsageError(f"model order {n} exceeds cap {config.order_cap()}")
        return trivial_quandle(n) if kind == "trivial" else dihedral_quandle(n)
    if kind == "table":
        try:
            return parse_table(_read(arg))
        except ValueError as e:
            raise UsageError(f"{arg}: {e}") from None
    raise UsageError(f"unknown model kind {kind!r}")


def parse_assignment(text: str) -> dict:
    out = {}
    for part in text.split(","):
        if not part.strip():
            continue
        name, sep, value = part.partition("=")
        name, value = name.strip(), value.strip()
        if not sep or not name or not value.lstrip("-").isdigit():
            raise UsageError(f"bad assignment entry {part.strip()!r}; expected name=int")
        out[name] = int(value)
    return out


def _term(text: str):
    try:
        return parse_term(text)
    except ParseError as e:
        raise UsageError(f"term {text!r}: {e}") from None


def _p_index(n: int) -> int:
    if n < 0 or n > config.p_cap():
        raise UsageError(f"generator index {n} outside 0..{config.p_cap()}")
    return n


def _emit(args, payload, text: str):
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def cmd_eval(args) -> int:
    pres = load_presentation(args.pres)
    term = _term(args.term)
    Q = load_model(args.model)
    assignment = parse_assignment(args.assign)
    undeclared = leaves(term) - set(pres.generators)
    if undeclared:
        raise UsageError(f"term uses undeclared generator(s): {', '.join(sorted(undeclared))}")
    missing = leaves(term) - set(assignment)
    if missing:
        raise UsageError(f"unassigned generator(s): {', '.join(sorted(missing))}")
    for name, v in assignment.items():
        if not 0 <= v < len(Q):
            raise UsageError(f"value {v} for {name} outside the model (order {len(Q)})")
    value = eval_term(term, assignment, Q)
    _emit(args, {"value": value}, str(value))
    return 0


def cmd_eq(args) -> int:
    m, n = _p_index(args.p), _p_index(args.q)
    model = default_model()
    same = model.p(m) == model.p(n)
    _emit(args, {"p": m, "q": n, "equal": same}, "true" if same else "false")
    return 0


def cmd_orbit(args) -> int:
    model = default_model()
    if args.term is not None:
        term = _term(args.term)
        stray = leaves(term) - {"a", "b"}
        if stray:
            raise UsageError(f"terms must be over a, b; found {', '.join(sorted(stray))}")
        elem = model.iso_g(term)
    else:
        elem = model.p(_p_index(args.p))
    tag = model.orbit(elem)
    _emit(args, {"orbit": tag}, tag)
    return 0


def cmd_nf(args) -> int:
    elem = default_model().p(_p_index(args.p))
    _emit(args, {"p": args.p, **elem.to_json()}, str(elem.value))
    return 0


def cmd_alexander(args) -> int:
    pres = load_presentation(args.pres)
    mat = alexander_matrix(pres)
    reduced, steps = matrix_reduce(mat)
    desc = describe_module(mat)
    payload = {
        "matrix": mat.to_json(),
        "reduced": reduced.to_json(),
        "steps": [s.to_json() for s in steps],
        "module": desc.to_json(),
    }
    text = "\n\n".join(
        [
            f"matrix:\n{mat}",
            f"reduced:\n{reduced}",
            "steps:\n" + ("\n".join(f"  {s}" for s in steps) or "  (none)"),
            f"module: {desc}",
        ]
    )
    _emit(args, payload, text)
    return 0


def cmd_homcount(args) -> int:
    pres = load_presentation(args.pres)
    Q = load_model(args.model)
    if len(pres.generators) > config.gens_cap():
        raise UsageError(f"{len(pres.generators)} generators exceed cap {config.gens_cap()}")
    count = hom_count(pres, Q)
    _emit(args, {"count": count}, str(count))
    return 0


def cmd_enumerate(args) -> int:
    if args.order < 1 or args.order > config.order_cap():
        raise UsageError(f"order must be in 1..{config.order_cap()}")
    qs = enumerate_quandles(args.order)
    _emit(args, {"order": args.order, "quandles": [Q.to_json() for Q in qs]}, "\n\n".join(Q.to_text() for Q in qs))
    return 0


def cmd_hnn(args) -> int:
    pres = load_presentation(args.pres)
    try:
        tau = parse_tau(args.tau)
        data = HnnData(pres, args.letter, tau)
    except (ParseError, PresentationError, ValueError) as e:
        raise UsageError(str(e)) from None
    ext = hnn_extend(data)
    _emit(args, ext.to_json(), ext.to_dsl().rstrip("\n"))
    return 0


def cmd_verify(args) -> int:
    from .experiments import run_suite

    reports = run_suite(args.suite)
    for r in reports:
        print(r.to_json() if args.json else r.line())
    failed = [r for r in reports if not r.passed]
    if failed and not args.json:
        for r in failed:
            print(f"counterexample for {r.name}: {json.dumps(r.counterexample)}", file=sys.stderr)
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    from .experiments import SUITE_NAMES

    parser = argparse.ArgumentParser(prog="quandleforge", description="Thompson's quandle workbench")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate a term in a finite model")
    p.add_argument("--pres", required=True)
    p.add_argument("--term", required=True)
    p.add_argument("--model", required=True, help="trivial:N | dihedral:N | table:FILE")
    p.add_argument("--assign", required=True, help="e.g. a=0,b=1")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("eq", parents=[common], help="compare p(M) and p(N) in F")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_eq)

    p = sub.add_parser("orbit", parents=[common], help="orbit (A or B) of p(N) or of a term over a, b")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--p", type=int)
    g.add_argument("--term")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("nf", parents=[common], help="reduced tree pair of p(N)")
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_nf)

    p = sub.add_parser("alexander", parents=[common], help="Alexander module of a presentation")
    p.add_argument("--pres", required=True)
    p.set_defaults(func=cmd_alexander)

    p = sub.add_parser("homcount", parents=[common], help="count morphisms into a finite model")
    p.add_argument("--pres", required=True)
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_homcount)

    p = sub.add_parser("enumerate", parents=[common], help="quandles of a given order up to isomorphism")
    p.add_argument("--order", type=int, required=True)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("hnn", parents=[common], help="HNN extension of a presentation")
    p.add_argument("--pres", required=True)
    p.add_argument("--tau", required=True, help='e.g. "a->b, b->a|>b"')
    p.add_argument("--letter", default="t")
    p.set_defaults(func=cmd_hnn)

    p = sub.add_parser("verify", parents=[common], help="run experiment suites")
    p.add_argument("--suite", choices=SUITE_NAMES, default="all")
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        config.order_cap()
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
