"""``sv``: command-line driver for the sv engine.

Every command is a pure function of its arguments; text and JSON output are
deterministic.  Exit status: 0 success, 1 a check failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .combination import parse_rational
from .lie import HalfInteger, parse_generator
from .modules import (
    ModuleVector,
    Quotient,
    Universal,
    Verma,
    WhittakerHom,
    act,
    cyclic,
    dot_act,
    spec_to_json,
    validate,
)
from .parse import ExpressionError, parse_expression
from .pbw import commutator
from .solver import (
    BoundExceeded,
    Truncation,
    nilpotency_index,
    singular_vectors,
    submodule_closure,
    whittaker_vectors,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _half_integer(text: str) -> HalfInteger:
    q = _rational(text)
    if (2 * q).denominator != 1 or q < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer or half-integer, got {text!r}")
    return HalfInteger.of(q)


def _nonneg(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {n}")
    return n


def _read_json(arg: str):
    """Inline JSON, or the contents of the file named by ``arg``."""
    text = arg
    if not arg.lstrip().startswith(("[", "{")) and os.path.exists(arg):
        with open(arg) as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"cannot read JSON from {arg!r}: {exc}")


def read_vector(arg: str) -> ModuleVector:
    """A ModuleVector from inline JSON, a JSON file, or ``w`` for the cyclic vector."""
    if arg.strip() == "w":
        return cyclic()
    data = _read_json(arg)
    try:
        return ModuleVector.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed vector: {exc}")


# -- argument groups -----------------------------------------------------------------


def _add_module_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("module")
    g.add_argument("--module", choices=("universal", "quotient", "verma"), default="universal")
    for name in ("eta1", "eta2", "m1", "eta3"):
        g.add_argument(f"--{name}", type=_rational, default=Fraction(0), metavar="Q")
    g.add_argument("--xi", type=_rational, default=Fraction(0), metavar="Q")
    g.add_argument("--zeta", type=_rational, default=Fraction(0), metavar="Q")


def _add_window_args(p: argparse.ArgumentParser, deg_default: Optional[str] = None) -> None:
    g = p.add_argument_group("truncation")
    g.add_argument("--deg", type=_half_integer, default=deg_default, required=deg_default is None, metavar="D")
    g.add_argument("--l0", type=_nonneg, default=0, metavar="D0")
    g.add_argument("--m0", type=_nonneg, default=0, metavar="K")


def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json"), default="text")


def module_spec(args):
    psi = WhittakerHom(args.eta1, args.eta2, args.m1, args.eta3)
    if args.module == "universal":
        return Universal(psi)
    if args.module == "quotient":
        return Quotient(psi, args.xi)
    if not psi.is_zero():
        raise UsageError("the Verma module is only defined for psi = 0")
    return Verma(args.xi, args.zeta)


def window(args) -> Truncation:
    return Truncation(args.deg, args.l0, args.m0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sv", description="Exact computations in the Schrodinger-Virasoro algebra.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normal-form", help="PBW normal form of an expression")
    p.add_argument("expr")
    _add_format(p)

    p = sub.add_parser("bracket", help="commutator [a, b] in U(sv)")
    p.add_argument("a")
    p.add_argument("b")
    _add_format(p)

    p = sub.add_parser("act", help="act with an expression on a module vector")
    p.add_argument("expr")
    p.add_argument("--on", required=True, metavar="VECTOR")
    _add_module_args(p)
    _add_format(p)

    p = sub.add_parser("dot-act", help="dot action x.v = xv - psi(x)v of an sv+ generator")
    p.add_argument("gen")
    p.add_argument("--on", required=True, metavar="VECTOR")
    _add_module_args(p)
    _add_format(p)

    for name, helptext in (
        ("whittaker-vectors", "Whittaker vectors of the module's own type in a window"),
        ("singular-vectors", "vectors killed by sv+ in a window"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_module_args(p)
        _add_window_args(p)
        _add_format(p)

    p = sub.add_parser("nilpotency", help="least m with (g.)^m v = 0")
    p.add_argument("gen")
    p.add_argument("--on", required=True, metavar="VECTOR")
    p.add_argument("--bound", type=_nonneg, default=12)
    _add_module_args(p)
    _add_format(p)

    p = sub.add_parser("closure", help="windowed span of the submodule generated by vectors")
    p.add_argument("--gens", required=True, metavar="FILE", help="JSON list of vectors (file or inline)")
    p.add_argument("--bound", type=_nonneg, default=4, help="largest |weight| of the acting generators")
    _add_module_args(p)
    _add_window_args(p)
    _add_format(p)

    p = sub.add_parser("verify", help="run the verification suite")
    _add_window_args(p, deg_default="3")
    p.set_defaults(l0=3, m0=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bound", type=_nonneg, default=4, help="generator weight bound for closures")
    p.add_argument("--only", action="append", metavar="CHECK", help="run only the named check (repeatable)")
    p.add_argument("--timings", action="store_true", help="report elapsed time per check")
    p.add_argument("--corrupt-relations", action="store_true", help=argparse.SUPPRESS)
    _add_format(p)
    return parser


# -- commands -------------------------------------------------------------------------


def _emit(args, text: str, data) -> None:
    if args.format == "json":
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)


def _generator(text: str):
    try:
        return parse_generator(text)
    except ValueError as exc:
        raise UsageError(str(exc))


def cmd_normal_form(args) -> int:
    u = parse_expression(args.expr)
    _emit(args, str(u), u.to_json())
    return EXIT_OK


def cmd_bracket(args) -> int:
    u = commutator(parse_expression(args.a), parse_expression(args.b))
    _emit(args, str(u), u.to_json())
    return EXIT_OK


def _vector_arg(args, spec) -> ModuleVector:
    v = read_vector(args.on)
    try:
        validate(v, spec)
    except ValueError as exc:
        raise UsageError(str(exc))
    return v


def cmd_act(args) -> int:
    spec = module_spec(args)
    v = act(parse_expression(args.expr), _vector_arg(args, spec), spec)
    _emit(args, str(v), v.to_json())
    return EXIT_OK


def cmd_dot_act(args) -> int:
    spec = module_spec(args)
    g = _generator(args.gen)
    if not g.is_positive:
        raise UsageError(f"dot action needs an sv+ generator, got {g}")
    v = dot_act(g, _vector_arg(args, spec), spec)
    _emit(args, str(v), v.to_json())
    return EXIT_OK


def _report(args, rep, spec) -> int:
    lines = [
        f"module: {spec.kind}",
        f"window: D={rep.truncation.D} D0={rep.truncation.D0} K={rep.truncation.K} ({rep.candidates} candidates)",
        f"conditions: {', '.join(map(str, rep.conditions))}",
        f"dimension: {rep.dimension}",
    ]
    lines += [f"  {v}" for v in rep.basis]
    data = rep.to_json()
    data["module"] = spec_to_json(spec)
    _emit(args, "\n".join(lines), data)
    return EXIT_OK


def cmd_whittaker(args) -> int:
    spec = module_spec(args)
    return _report(args, whittaker_vectors(spec, window(args)), spec)


def cmd_singular(args) -> int:
    spec = module_spec(args)
    return _report(args, singular_vectors(spec, window(args)), spec)


def cmd_nilpotency(args) -> int:
    spec = module_spec(args)
    g = _generator(args.gen)
    if not g.is_positive:
        raise UsageError(f"dot action needs an sv+ generator, got {g}")
    if args.bound < 1:
        raise UsageError("--bound must be at least 1")
    v = _vector_arg(args, spec)
    try:
        m = nilpotency_index(g, v, spec, args.bound)
    except BoundExceeded as exc:
        _emit(args, f"bound exceeded: {exc}", {"index": None, "bound": args.bound})
        return EXIT_FAIL
    _emit(args, str(m), {"index": m, "bound": args.bound})
    return EXIT_OK


def cmd_closure(args) -> int:
    spec = module_spec(args)
    data = _read_json(args.gens)
    if not isinstance(data, list) or (data and isinstance(data[0], dict) and "index" in data[0]):
        raise UsageError("--gens must be a JSON list of vectors")
    gens = []
    for item in data:
        try:
            v = ModuleVector.from_json(item)
            validate(v, spec)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed vector: {exc}")
        gens.append(v)
    span = submodule_closure(gens, spec, window(args), args.bound)
    text = "\n".join([f"dimension: {len(span)}"] + [f"  {v}" for v in span])
    _emit(args, text, {"dimension": len(span), "basis": [v.to_json() for v in span]})
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import corrupted_relations, run_verify

    def go():
        return run_verify(window(args), args.seed, only=args.only, gen_weight_bound=args.bound)

    try:
        if args.corrupt_relations:
            with corrupted_relations():
                report = go()
        else:
            report = go()
    except KeyError as exc:
        raise UsageError(exc.args[0])
    _emit(args, report.render(args.timings), report.to_json(args.timings))
    return EXIT_OK if report.passed else EXIT_FAIL


COMMANDS = {
    "normal-form": cmd_normal_form,
    "bracket": cmd_bracket,
    "act": cmd_act,
    "dot-act": cmd_dot_act,
    "whittaker-vectors": cmd_whittaker,
    "singular-vectors": cmd_singular,
    "nilpotency": cmd_nilpotency,
    "closure": cmd_closure,
    "verify": cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ExpressionError) as exc:
        print(f"sv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
