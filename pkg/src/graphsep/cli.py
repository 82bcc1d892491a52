"""``graphsep`` command line.

Exit codes: 0 biseparable, 1 GME, 2 inconclusive, 64 malformed input or
usage, 65 a state that violates its invariants (negative weights, wrong
normalization, too many qubits), 70 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import jsonio
from .certificates import EXIT_CODES, Biseparable, Gme

EX_USAGE = 64
EX_DATAERR = 65
EX_SOFTWARE = 70


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage, which collides with INCONCLUSIVE."""

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --------------------------------------------------------------------------
# input resolution


def _load_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise jsonio.FormatError(f"{path}: malformed JSON ({exc})") from exc
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from exc


def _parse_p(text: str, allow_float: bool) -> Fraction:
    try:
        if allow_float:
            return Fraction(repr(float(text)))
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot read white-noise parameter {text!r}") from exc


def _graph(args):
    from .graphs import builtin_graph

    if args.builtin:
        try:
            return builtin_graph(args.builtin)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if args.graph:
        return jsonio.graph_from_json(_load_json(args.graph))
    if args.state:
        return _state(args).graph
    raise UsageError("give --builtin NAME, --graph FILE or --state FILE")


def _state(args):
    from .states import white_noise

    allow_float = getattr(args, "float", False)
    if args.state:
        if args.white_noise is not None:
            raise UsageError("--white-noise applies to --builtin or --graph inputs")
        return jsonio.state_from_json(_load_json(args.state), allow_float=allow_float)
    if args.white_noise is None:
        raise UsageError("--builtin and --graph need --white-noise P to define a state")
    p = _parse_p(args.white_noise, allow_float)
    if not 0 <= p <= 1:
        raise ValueError(f"white-noise parameter {p} is outside [0, 1]")
    return white_noise(_graph(args), p)


def _emit(path: str | None, obj):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(jsonio.dumps(obj))


def _oracle(target, witnesses=()):
    from .oracle import crosscheck

    return crosscheck(target, witnesses).as_dict()


# --------------------------------------------------------------------------
# subcommands


def cmd_classify(args) -> tuple:
    from .classify import classify

    s = _state(args)
    v = classify(s, restrict_1bp=args.restrict_1bp)
    out = jsonio.verdict_to_json(v)
    if isinstance(v, Gme):
        _emit(args.emit_witness, jsonio.witness_to_json(v.witness))
    if isinstance(v, Biseparable):
        _emit(args.emit_decomposition, jsonio.decomposition_to_json(v.decomposition))
    if args.oracle:
        out["oracle"] = _oracle(s, [v.witness] if isinstance(v, Gme) else [])
    return out, EXIT_CODES[v.verdict]


def cmd_decompose(args) -> tuple:
    from .classify import classify

    s = _state(args)
    v = classify(s, restrict_1bp=args.restrict_1bp)
    if isinstance(v, Biseparable):
        out = jsonio.decomposition_to_json(v.decomposition)
        out["tags"] = dict(sorted(v.decomposition.tag_counts().items()))
        _emit(args.emit_decomposition, out)
    else:
        out = jsonio.verdict_to_json(v)
        out["error"] = "no biseparable decomposition: state is not certified biseparable"
        if isinstance(v, Gme):
            _emit(args.emit_witness, jsonio.witness_to_json(v.witness))
    return out, EXIT_CODES[v.verdict]


def cmd_threshold(args) -> tuple:
    from .classify import find_threshold, sweep

    try:
        th = find_threshold(args.name)
    except ValueError as exc:
        raise UsageError(f"unsupported graph {args.name!r}: {exc}") from exc
    out = {"graph": args.name,
           "threshold": [jsonio.rat(x) for x in th] if isinstance(th, tuple) else jsonio.rat(th)}
    if args.sweep:
        points = [Fraction(k, args.sweep) for k in range(args.sweep + 1)]
        out["sweep"] = [{"p": jsonio.rat(p), "verdict": verdict} for p, verdict in sweep(args.name, points)]
    return out, 0


def cmd_witness(args) -> tuple:
    from .witnesses import named_witness, validate_witness

    if args.file:
        w = jsonio.witness_from_json(_load_json(args.file))
    elif args.name:
        try:
            w = named_witness(args.name)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    else:
        raise UsageError("give a witness NAME or --file FILE")
    report = validate_witness(w, dense=args.oracle)
    out = {"witness": jsonio.witness_to_json(w), "valid": report.valid, "kind": report.kind}
    if report.violations:
        out["violations"] = [list(map(lambda x: x if x is None or isinstance(x, str) else jsonio.rat(x), v))
                             for v in report.violations]
    if args.oracle:
        out["oracle"] = {"max_deviation": report.max_dense_deviation,
                         "dense_min_eigenvalue": report.dense_min_eigenvalue}
    _emit(args.emit_witness, jsonio.witness_to_json(w))
    code = 0
    if args.state or args.builtin or args.graph:
        s = _state(args)
        if s.graph != w.graph:
            raise ValueError("witness and state live on different graphs")
        value = w.evaluate(s)
        out["value"] = jsonio.rat(value)
        code = EXIT_CODES["GME"] if value < 0 and report.valid else EXIT_CODES["INCONCLUSIVE"]
    return out, code


def cmd_pptmix(args) -> tuple:
    from . import pptmix

    s = _state(args)
    parts = "1bp" if args.restrict_1bp else None
    if args.export_lp:
        with open(args.export_lp, "w", encoding="utf-8") as fh:
            fh.write(pptmix.export_lp(s, parts))
    cert = pptmix.is_ppt_mixture(s, parts)
    out = {"ppt_mixture": cert.feasible, "partitions": "1bp" if parts else "all",
           "certificate": jsonio.lp_certificate_to_json(cert)}
    if cert.feasible:
        return out, EXIT_CODES["INCONCLUSIVE"]
    if parts:
        # infeasible over a subset of partitions says nothing about GME
        return out, EXIT_CODES["INCONCLUSIVE"]
    w = pptmix.dual_witness(cert, s)
    out["witness"] = jsonio.witness_to_json(w)
    out["value"] = jsonio.rat(w.evaluate(s))
    _emit(args.emit_witness, out["witness"])
    return out, EXIT_CODES["GME"]


def cmd_graph(args) -> tuple:
    from .graphs import all_bipartitions, cut_rank, graph_family, stabilizer_generator

    g = _graph(args)
    out = {"graph": jsonio.graph_to_json(g), "family": graph_family(g), "connected": g.is_connected(),
           "generators": [str(stabilizer_generator(g, i)) for i in range(1, g.n + 1)],
           "cut_ranks": {m.label(): cut_rank(g, m) for m in all_bipartitions(g.n)}}
    if args.oracle:
        out["oracle"] = _oracle(_state(args) if args.white_noise is not None or args.state else g)
    return out, 0


# --------------------------------------------------------------------------


def _input_flags(p: argparse.ArgumentParser, need_state: bool = True):
    src = p.add_mutually_exclusive_group()
    src.add_argument("--builtin", metavar="NAME", help="builtin graph (C4, GHZ4, Y5, C5, R5, C6, Y{N}, ...)")
    src.add_argument("--state", metavar="FILE", help="state JSON file ('-' for stdin)")
    src.add_argument("--graph", metavar="FILE", help="graph JSON file")
    p.add_argument("--white-noise", metavar="P", help="white-noise parameter for --builtin/--graph")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", dest="float", action="store_false", default=False,
                      help="read numbers as exact rationals (default)")
    mode.add_argument("--float", dest="float", action="store_true",
                      help="accept JSON floats, read by decimal form, and renormalize")
    p.add_argument("--oracle", action="store_true", help="add dense cross-check diagnostics")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphsep", description="GME vs biseparability for graph-diagonal states")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="verdict with certificate")
    _input_flags(p)
    p.add_argument("--restrict-1bp", action="store_true", help="only one-Bell-pair partitions in the LP")
    p.add_argument("--emit-witness", metavar="FILE")
    p.add_argument("--emit-decomposition", metavar="FILE")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("decompose", help="biseparable decomposition")
    _input_flags(p)
    p.add_argument("--restrict-1bp", action="store_true", help="only one-Bell-pair partitions in the LP")
    p.add_argument("--emit-witness", metavar="FILE")
    p.add_argument("--emit-decomposition", metavar="FILE")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("threshold", help="exact white-noise threshold of a builtin graph")
    p.add_argument("name")
    p.add_argument("--sweep", type=int, metavar="K", help="also classify p = 0, 1/K, ..., 1")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("witness", help="emit, validate and evaluate a witness")
    p.add_argument("name", nargs="?", help="named witness (W1, W2, Y5, C5, R5, R5-rescaled, GHZ3, GHZ4)")
    p.add_argument("--file", metavar="FILE", help="witness JSON file")
    _input_flags(p)
    p.add_argument("--emit-witness", metavar="FILE")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("pptmix", help="PPT-mixture LP with its certificate")
    _input_flags(p)
    p.add_argument("--restrict-1bp", action="store_true", help="only one-Bell-pair partitions in the LP")
    p.add_argument("--export-lp", metavar="FILE", help="write the LP in CPLEX LP format")
    p.add_argument("--emit-witness", metavar="FILE")
    p.set_defaults(func=cmd_pptmix)

    p = sub.add_parser("graph", help="graph summary: generators and cut ranks")
    _input_flags(p)
    p.set_defaults(func=cmd_graph)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        out, code = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_USAGE
    except jsonio.FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_DATAERR
    except Exception as exc:  # noqa: BLE001 - last-resort exit code
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EX_SOFTWARE
    sys.stdout.write(jsonio.dumps(out))
    return code


if __name__ == "__main__":
    sys.exit(main())
