"""toeplitz-aut: command line access to the Toeplitz subshift toolkit."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import complexity as cx
from .autgroup import decompose, reconstruct, sigma
from .blockmap import Rule, compose, compose_power, minimize
from .endo_search import enumerate_endomorphisms
from .errors import AssumptionViolated, ToeplitzError
from .factor import phase
from .lifting_group import (
    add,
    format_rational,
    format_vector,
    from_rational,
    parse_rational,
    residue,
    to_rational,
)
from .substrate import (
    DEFAULT_PARAMS,
    PartialWindow,
    essential_periods,
    generate,
    language,
    point_window,
    skeleton,
    skeleton_xw,
    validate_params,
)
from .verify import CRITERIA, run_all

EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _range(text):
    try:
        a, b = text.split(":")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A:B, got {text!r}") from None


def _params(args):
    cfg = {"p": DEFAULT_PARAMS.p, "p_prime": DEFAULT_PARAMS.p_prime,
           "q": DEFAULT_PARAMS.q, "w": DEFAULT_PARAMS.w}
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
        unknown = set(data) - set(cfg)
        if unknown:
            raise UsageError(f"unknown config keys {sorted(unknown)}")
        cfg.update(data)
    for key in cfg:
        val = getattr(args, key)
        if val is not None:
            cfg[key] = val
    try:
        return validate_params(int(cfg["p"]), int(cfg["p_prime"]), int(cfg["q"]), str(cfg["w"]))
    except (AssumptionViolated, ValueError) as exc:
        raise UsageError(f"invalid parameters: {exc}") from None


def _load_rule(params, path):
    try:
        return Rule.from_json(params, Path(path).read_text())
    except (OSError, KeyError, ValueError) as exc:
        raise UsageError(f"cannot read rule {path}: {exc}") from None


def _emit(args, text, payload=None):
    if args.format == "json" and payload is not None:
        text = json.dumps(payload, sort_keys=True)
    if not text.endswith("\n"):
        text += "\n"
    if args.out and args.command != "search":
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args, params):
    a, b = args.range
    y = point_window(params, a, b) if args.depth is None else generate(params, args.depth, a, b)
    _emit(args, y.to_text() if args.format == "text" and args.offset else y.cells, y.to_json())


def cmd_skeleton(args, params):
    a, b = args.range
    if (args.level is None) == (args.k is None):
        raise UsageError("give exactly one of --level and --k")
    y = skeleton_xw(params, args.level, a, b) if args.k is None else skeleton(params, args.k, a, b)
    _emit(args, y.cells, y.to_json())


def cmd_periods(args, params):
    got = essential_periods(params, args.k_max)
    _emit(args, " ".join(map(str, got)), got)


def cmd_language(args, params):
    words = language(params, args.length)
    if args.count:
        _emit(args, str(len(words)), len(words))
    else:
        _emit(args, "\n".join(words), words)


def cmd_phase(args, params):
    ph = phase(params, PartialWindow(args.offset, args.window), args.level)
    _emit(args, str(ph), ph.to_json())


def cmd_sigma(args, params):
    f = sigma(params, args.j, -1 if args.inverse else 1)
    _emit(args, f.dumps())


def cmd_compose(args, params):
    rules = [_load_rule(params, p) for p in args.rule]
    out = rules[-1]
    for f in reversed(rules[:-1]):
        out = compose(f, out)
    if args.power != 1:
        out = compose_power(out, args.power)
    _emit(args, minimize(out).dumps())


def cmd_decompose(args, params):
    if (args.rule is None) == (args.coeffs is None):
        raise UsageError("give exactly one of --rule and --coeffs")
    if args.rule is not None:
        f = _load_rule(params, args.rule)
    else:
        f = reconstruct(params, json.loads(args.coeffs))
    d = decompose(params, f)
    _emit(args, f"{format_vector(d.coeffs)} {format_rational(d.value)}", d.to_json())


def cmd_group(args, params):
    p, q = params.p, params.q
    try:
        xs = [parse_rational(x) for x in args.values]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None
    if args.op == "nf":
        if len(xs) != 1:
            raise UsageError("nf takes one rational")
        c = from_rational(xs[0], p, q)
        _emit(args, format_vector(c), c)
    elif args.op == "residue":
        if len(xs) != 1 or args.mod is None:
            raise UsageError("residue takes one rational and --mod")
        r = residue(xs[0], args.mod)
        _emit(args, str(r), r)
    elif args.op == "add":
        if len(xs) < 2:
            raise UsageError("add takes at least two rationals")
        total = xs[0]
        for x in xs[1:]:
            total = add(total, x)
        c = from_rational(total, p, q)
        _emit(args, f"{format_rational(total)} {format_vector(c)}",
              {"value": format_rational(total), "coeffs": c})
    else:
        c = [int(v) for v in args.values]
        x = to_rational(c, p, q)
        _emit(args, format_rational(x), format_rational(x))


def cmd_complexity(args, params):
    prof = cx.profile(params, args.k_from, args.k_to, args.method)
    text = prof.to_csv()
    if args.csv:
        Path(args.csv).write_text(text)
    if args.format == "csv" or not args.csv:
        _emit(args, text, dict(prof.entries))
    else:
        rec = cx.recurrence_check(prof)
        lines = [f"recurrence: {'ok' if rec.ok else 'FAILS'} ({len(rec.checked)} checked)"]
        if len(prof.entries) >= 8:
            lines.append(f"fitted exponent: {cx.exponent_fit(prof):.4f}")
        _emit(args, "\n".join(lines))


def cmd_search(args, params):
    found = enumerate_endomorphisms(params, args.radius, args.depth)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for i, f in enumerate(found):
            (out / f"rule_{args.radius}_{i:03d}.json").write_text(f.dumps() + "\n")
    if args.format == "json":
        sys.stdout.write(json.dumps([f.to_json() for f in found], sort_keys=True) + "\n")
    else:
        sys.stdout.write(f"{len(found)} rules of radius {args.radius} survive depth {args.depth}\n")


def cmd_verify(args, params):
    if args.suite == "all":
        numbers = None
    else:
        try:
            numbers = [int(x) for x in args.suite.split(",")]
        except ValueError:
            raise UsageError(f"bad suite {args.suite!r}") from None
        if any(not 1 <= n <= len(CRITERIA) for n in numbers):
            raise UsageError(f"criteria are numbered 1..{len(CRITERIA)}")
    results = run_all(params, numbers)
    _emit(args, "\n".join(r.line() for r in results))
    return 0 if all(r.ok for r in results) else EXIT_FAIL


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int)
    common.add_argument("--p-prime", dest="p_prime", type=int)
    common.add_argument("--q", type=int)
    common.add_argument("--w", help="one period of w^Z over 0, 1 and _ (hole)")
    common.add_argument("--config", help="JSON file with any of p, p_prime, q, w")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--out", help="write output here instead of stdout")

    ap = argparse.ArgumentParser(prog="toeplitz-aut", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", parents=[common], help="cells of x^depth(w) or of x(w)")
    s.add_argument("--depth", type=int)
    s.add_argument("--range", type=_range, required=True, help="A:B, inclusive")
    s.add_argument("--offset", action="store_true", help="text output with an offset line")
    s.set_defaults(fn=cmd_gen)

    s = sub.add_parser("skeleton", parents=[common], help="skeleton of x(w)")
    s.add_argument("--level", type=int, help="Sk(p^level)")
    s.add_argument("--k", type=int, help="Sk(k) for any k >= 1")
    s.add_argument("--range", type=_range, required=True)
    s.set_defaults(fn=cmd_skeleton)

    s = sub.add_parser("periods", parents=[common], help="essential periods up to K")
    s.add_argument("--k-max", type=int, default=130)
    s.set_defaults(fn=cmd_periods)

    s = sub.add_parser("language", parents=[common], help="factors of a given length")
    s.add_argument("--length", type=int, required=True)
    s.add_argument("--count", action="store_true")
    s.set_defaults(fn=cmd_language)

    s = sub.add_parser("phase", parents=[common], help="phase of a window mod p^level")
    s.add_argument("--window", required=True)
    s.add_argument("--offset", type=int, default=0)
    s.add_argument("--level", type=int, default=1)
    s.set_defaults(fn=cmd_phase)

    s = sub.add_parser("sigma", parents=[common], help="rule of sigma_j")
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--inverse", action="store_true")
    s.set_defaults(fn=cmd_sigma)

    s = sub.add_parser("compose", parents=[common], help="compose rules, leftmost applied last")
    s.add_argument("--rule", action="append", required=True)
    s.add_argument("--power", type=int, default=1)
    s.set_defaults(fn=cmd_compose)

    s = sub.add_parser("decompose", parents=[common], help="value of a rule in A(p,q)")
    s.add_argument("--rule")
    s.add_argument("--coeffs", help="JSON list, decomposes the reconstructed product")
    s.set_defaults(fn=cmd_decompose)

    s = sub.add_parser("group", parents=[common], help="arithmetic in A(p,q)")
    s.add_argument("op", choices=("nf", "residue", "add", "value"))
    s.add_argument("values", nargs="+")
    s.add_argument("--mod", type=int)
    s.set_defaults(fn=cmd_group)

    s = sub.add_parser("complexity", parents=[common], help="factor counts n(k)")
    s.add_argument("--from", dest="k_from", type=int, default=1)
    s.add_argument("--to", dest="k_to", type=int, default=100)
    s.add_argument("--method", choices=("auto", "enumerate", "recursive"), default="auto")
    s.add_argument("--csv", help="also write the k,n_k table here")
    s.set_defaults(fn=cmd_complexity)

    s = sub.add_parser("search", parents=[common], help="all block maps of a radius that preserve X")
    s.add_argument("--radius", type=int, required=True)
    s.add_argument("--depth", type=int, default=40)
    s.set_defaults(fn=cmd_search)

    s = sub.add_parser("verify", parents=[common], help="run the acceptance battery")
    s.add_argument("--suite", default="all", help="'all' or comma separated criterion numbers")
    s.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        params = _params(args)
        status = args.fn(args, params)
    except UsageError as exc:
        print(f"{ap.prog} {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ToeplitzError as exc:
        print(f"{ap.prog} {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return status or 0


if __name__ == "__main__":
    sys.exit(main())
