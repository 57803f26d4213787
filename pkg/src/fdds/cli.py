"""Command-line front end.

Exit codes: 0 for success (true, solution found), 1 for a negative answer
(false, no solution, not contained), 2 for usage or input errors.

Polynomial manifests have one term per line, ``<exponent> <file-or-literal>``,
with ``0`` for the constant term and ``#`` comments.  A relative file name is
resolved against the manifest's directory.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional, Sequence

from .core import Fdds, Polynomial, evaluate, parse_fdds, to_dot
from .errors import (
    ConstructionFailed,
    LimitExceeded,
    MalformedInput,
    MalformedPolynomial,
    NotSupportedNonInjective,
)
from .injectivity import counterexample, counterexample_monomial, is_injective
from .trees import Forest, parse_forest, parse_tree

__all__ = ["run", "main", "parse_manifest", "load_fdds"]

OK, NO, USAGE = 0, 1, 2


class _Usage(Exception):
    pass


def _read_source(source: str, base: Optional[str] = None) -> str:
    """Contents of a file, or ``source`` itself when no such file exists."""
    candidate = source if base is None or os.path.isabs(source) else os.path.join(base, source)
    if os.path.isfile(candidate):
        with open(candidate, encoding="utf-8") as fh:
            return fh.read()
    if os.path.isfile(source):
        with open(source, encoding="utf-8") as fh:
            return fh.read()
    if source.endswith((".fdds", ".forest", ".manifest", ".txt")):
        raise _Usage(f"no such file: {source}")
    return source


def _parse_inline_forest(text: str) -> Forest:
    if "\n" in text.strip():
        return parse_forest(text)
    return Forest(parse_tree(tok) for tok in text.replace("+", " ").split())


def load_fdds(source: str, base: Optional[str] = None) -> Fdds:
    return parse_fdds(_read_source(source, base))


def load_forest(source: str, base: Optional[str] = None) -> Forest:
    return _parse_inline_forest(_read_source(source, base))


def parse_manifest(text: str, base: Optional[str] = None, carrier: str = "fdds") -> Polynomial:
    terms = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        head, _, rest = body.partition(" ")
        try:
            k = int(head)
        except ValueError:
            raise MalformedInput(f"exponent expected, got {head!r}", lineno, head) from None
        if k < 0:
            raise MalformedInput(f"negative exponent {k}", lineno, head)
        if k in terms:
            raise MalformedInput(f"exponent {k} appears twice", lineno, head)
        rest = rest.strip()
        if not rest:
            raise MalformedInput(f"term {k} has no coefficient", lineno, head)
        try:
            src = _read_source(rest, base)
            terms[k] = parse_fdds(src) if carrier == "fdds" else _parse_inline_forest(src)
        except MalformedInput as exc:
            raise MalformedInput(f"in coefficient of X^{k}: {exc}", lineno, exc.token) from None
    return Polynomial(terms)


def _load_poly(args, carrier: str = "fdds") -> Polynomial:
    text = _read_source(args.poly)
    base = os.path.dirname(os.path.abspath(args.poly)) if os.path.isfile(args.poly) else None
    return parse_manifest(text, base, carrier)


def _value_text(v) -> Optional[str]:
    return None if v is None else v.literal()


def _emit(args, status: str, value=None, trace=None, message: Optional[str] = None, extra=None) -> None:
    if args.json:
        rec = {"status": status, "value": _value_text(value), "trace": [list(t) for t in (trace or [])]}
        if message:
            rec["message"] = message
        if extra:
            rec.update(extra)
        print(json.dumps(rec))
    else:
        if message:
            print(message)
        if value is not None:
            print(_value_text(value))
        for key, val in (extra or {}).items():
            print(f"{key}: {val}")
    if getattr(args, "dot", None) and isinstance(value, Fdds):
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(value))


def _cmd_eval(args) -> int:
    P = _load_poly(args)
    x = load_fdds(args.x)
    _emit(args, "ok", evaluate(P, x))
    return OK


def _cmd_solve(args) -> int:
    from .solver import solve_fdds, solve_forest, solve_unroll

    if args.mode == "forest":
        P = _load_poly(args, "forest")
        out = solve_forest(P, load_forest(args.rhs))
    else:
        P = _load_poly(args)
        b = load_fdds(args.rhs)
        if args.mode == "unroll":
            out = solve_unroll(P, b)
        else:
            try:
                out = solve_fdds(P, b, bound=args.bound)
            except NotSupportedNonInjective as exc:
                _emit(args, "not_supported", message=f"not supported: {exc}")
                return NO
    if out.ok:
        _emit(args, out.status, out.value, out.trace)
        return OK
    _emit(args, out.status, None, out.trace, message="no solution")
    return NO


def _cmd_injective(args) -> int:
    P = _load_poly(args)
    if is_injective(P):
        _emit(args, "true", message="injective")
        return OK
    _emit(args, "false", message="not injective: no non-constant coefficient has a fixed point")
    return NO


def _cmd_witness(args) -> int:
    if args.set:
        try:
            A = [int(a) for a in args.set.split(",") if a.strip()]
        except ValueError:
            raise _Usage(f"bad cycle-length set {args.set!r}") from None
        X, Y = counterexample_monomial(A, args.k)
    else:
        if not args.poly:
            raise _Usage("witness needs --poly or --set")
        P = _load_poly(args)
        pair = counterexample(P)
        if pair is None:
            _emit(args, "injective", message="injective: no witness exists")
            return NO
        X, Y = pair
    if args.json:
        print(json.dumps({"status": "witness", "value": [X.literal(), Y.literal()], "trace": []}))
    else:
        print(f"X = {X.literal()}")
        print(f"Y = {Y.literal()}")
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(X, "X"))
            fh.write(to_dot(Y, "Y"))
    return OK


def _cmd_op(args) -> int:
    a = load_fdds(args.a)
    b = load_fdds(args.b)
    if args.op == "sum":
        r = a + b
    elif args.op == "product":
        r = a * b
    else:
        r = a.subtract(b)
        if r is None:
            _emit(args, "absent", message="second operand is not contained in the first")
            return NO
    _emit(args, "ok", r)
    return OK


def _cmd_unroll(args) -> int:
    from .unroll import unroll_cut

    x = load_fdds(args.x)
    _emit(args, "ok", unroll_cut(x, args.depth))
    return OK


def _cmd_iso(args) -> int:
    a = load_fdds(args.a)
    b = load_fdds(args.b)
    if a == b:
        _emit(args, "true", message="isomorphic")
        return OK
    _emit(args, "false", message="not isomorphic")
    return NO


def _cmd_oracle(args) -> int:
    from .oracle import brute_solve, enumerate_fdds, enumerate_trees

    if args.what == "trees":
        items = [t.code for t in enumerate_trees(args.n)]
    elif args.what == "fdds":
        items = [x.literal() for x in enumerate_fdds(args.n)]
    else:
        if not (args.poly and args.rhs):
            raise _Usage("oracle solve needs --poly and --rhs")
        P = _load_poly(args)
        b = load_fdds(args.rhs)
        sols = sorted(brute_solve(P, b, args.n), key=lambda x: x.literal())
        items = [x.literal() for x in sols]
        if args.json:
            print(json.dumps({"status": "solution" if sols else "no_solution", "value": items, "trace": []}))
        else:
            print("\n".join(items) if items else "no solution")
        return OK if sols else NO
    if args.json:
        print(json.dumps({"status": "ok", "value": items, "trace": []}))
    else:
        print("\n".join(items))
    return OK


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON record {status, value, trace}")
    common.add_argument("--dot", metavar="FILE", help="also write the resulting FDDS as Graphviz DOT")

    p = argparse.ArgumentParser(prog="fdds", description="Polynomial equations over finite dynamical systems.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="evaluate P at X")
    s.add_argument("--poly", required=True)
    s.add_argument("--x", required=True)
    s.set_defaults(func=_cmd_eval)

    s = sub.add_parser("solve", parents=[common], help="solve P(X) = B")
    s.add_argument("--poly", required=True)
    s.add_argument("--rhs", required=True)
    s.add_argument("--mode", choices=("fdds", "unroll", "forest"), default="fdds")
    s.add_argument("--bound", choices=("reroll", "unroll"), default="reroll")
    s.set_defaults(func=_cmd_solve)

    s = sub.add_parser("injective", parents=[common], help="decide injectivity of P")
    s.add_argument("--poly", required=True)
    s.set_defaults(func=_cmd_injective)

    s = sub.add_parser("witness", parents=[common], help="two distinct FDDS with equal images")
    s.add_argument("--poly")
    s.add_argument("--set", help="comma-separated cycle lengths, for a monomial witness")
    s.add_argument("--k", type=int, default=1)
    s.set_defaults(func=_cmd_witness)

    s = sub.add_parser("op", parents=[common], help="sum, product or subtraction")
    s.add_argument("op", choices=("sum", "product", "subtract"))
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=_cmd_op)

    s = sub.add_parser("unroll", parents=[common], help="cut unroll forest")
    s.add_argument("x")
    s.add_argument("--depth", type=int, required=True)
    s.set_defaults(func=_cmd_unroll)

    s = sub.add_parser("iso", parents=[common], help="isomorphism test")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=_cmd_iso)

    s = sub.add_parser("oracle", parents=[common], help="exhaustive enumeration and brute-force solving")
    s.add_argument("what", choices=("trees", "fdds", "solve"))
    s.add_argument("n", type=int, help="node count (bound for solve)")
    s.add_argument("--poly")
    s.add_argument("--rhs")
    s.set_defaults(func=_cmd_oracle)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except (MalformedInput, MalformedPolynomial, LimitExceeded, _Usage, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except ConstructionFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return NO


def main() -> None:
    sys.exit(run())
