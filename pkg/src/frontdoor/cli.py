"""Command-line front end: ``frontdoor <subcommand> ...``.

Exit codes: 0 success, 1 verification mismatch, 2 usage error, 3 parse error.
Errors are also written to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import verify
from .corpus import DEFAULT_SEED
from .counterexamples import (
    PreimageSpec,
    chain_model,
    chain_query,
    direct_path_counterexample,
    evaluate_gap,
    lifted_model,
)
from .criteria import CHECKERS, Query, find_cond_ii_pattern
from .distributions import (
    frontdoor_functional,
    interventional,
    model_to_text,
    observational_joint,
    read_model,
)
from .docalc import replay_main_proof
from .errors import FrontdoorError, ParseError
from .graph import parse_node_list, read_graph
from .paths import d_separated, find_open_path
from .projection import latent_project

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _assignment(text: str) -> dict:
    """``"X=0,W=1"`` -> ``{"X": 0, "W": 1}``; values are ints when they look like ints."""
    out = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        name, sep, value = part.partition("=")
        if not sep or not name.strip():
            raise UsageError(f"expected Node=value, got {part!r}")
        value = value.strip()
        out[name.strip()] = int(value) if value.lstrip("-").isdigit() else value
    return out


def _query(args, g) -> Query:
    return Query(args.x, args.y, args.z).validate(g)


def _table_dict(t) -> dict:
    return {",".join(map(str, k)): str(w) for k, w in t.weights.items()}


def _emit(args, payload: dict, text: str):
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _add_query_args(p, z_required=False):
    p.add_argument("--x", required=True, help="comma-separated treatment nodes")
    p.add_argument("--y", required=True, help="comma-separated outcome nodes")
    p.add_argument("--z", default="", required=z_required, help="comma-separated mediator / conditioning nodes")


def cmd_dsep(args) -> int:
    g = read_graph(args.graph)
    x, y, z = (g.check_nodes(parse_node_list(s)) for s in (args.x, args.y, args.z))
    sep = d_separated(g, x, y, z)
    witness = None if sep else find_open_path(g, x, y, z)
    _emit(args, {"separated": sep, "witness": None if witness is None else str(witness)},
          f"separated={str(sep).lower()}" + ("" if witness is None else f"\nopen path: {witness}"))
    return EXIT_OK


def cmd_project(args) -> int:
    g = read_graph(args.graph)
    keep = parse_node_list(args.keep) if args.keep else frozenset(g.observed)
    gp = latent_project(g, keep)
    _emit(args, {"graph": gp.to_text(), "edges": [" ".join(e) for e in gp.edges()]}, gp.to_text().rstrip())
    return EXIT_OK


def cmd_check(args) -> int:
    g = read_graph(args.graph)
    q = _query(args, g)
    names = list(CHECKERS) if args.criterion == "all" else [args.criterion]
    reports = [CHECKERS[n](g, q) for n in names]
    payload = {"query": q.to_dict(), "reports": [r.to_dict() for r in reports]}
    text = [r.to_text() for r in reports]
    if "gfdc" in names:
        w = find_cond_ii_pattern(g, q)
        payload["pattern"] = None if w is None else {"pattern": w.pattern, "path": str(w.path), "k": w.k}
        if w is not None:
            text.append(f"projected pattern ({w.pattern}): {w.path}")
    _emit(args, payload if len(reports) > 1 or "pattern" in payload else reports[0].to_dict(), "\n".join(text))
    if args.expect is not None and any(r.holds != (args.expect == "holds") for r in reports):
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_replay(args) -> int:
    g = read_graph(args.graph)
    trace = replay_main_proof(g, _query(args, g))
    _emit(args, trace.to_dict(), trace.to_text())
    return EXIT_OK if trace.valid else EXIT_MISMATCH


def cmd_evaluate(args) -> int:
    m = read_model(args.model)
    q = _query(args, m.graph)
    xstar = _assignment(args.xstar)
    j = observational_joint(m)
    f = frontdoor_functional(j, q, xstar)
    o = interventional(m, q.y, xstar)
    gaps = {k: f.weights[k] - o.weights[k] for k in f.weights}
    payload = {
        "query": q.to_dict(),
        "xstar": xstar,
        "variables": list(f.variables),
        "functional": _table_dict(f),
        "oracle": _table_dict(o),
        "gap": {",".join(map(str, k)): str(v) for k, v in gaps.items()},
        "match": f == o,
    }
    lines = [f"P(y | do({args.xstar})) over {', '.join(f.variables)}"]
    for k in f.weights:
        lines.append(f"  y={','.join(map(str, k))}: functional {f.weights[k]}, oracle {o.weights[k]}, gap {gaps[k]}")
    lines.append("functional = oracle" if f == o else "functional != oracle")
    _emit(args, payload, "\n".join(lines))
    if args.expect == "match" and f != o or args.expect == "mismatch" and f == o:
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_oracle(args) -> int:
    m = read_model(args.model)
    y = parse_node_list(args.y)
    do = _assignment(args.do)
    t = interventional(m, y, do)
    lines = [f"P({', '.join(t.variables)} | do({args.do}))"]
    lines += [f"  {','.join(map(str, k))}: {w}" for k, w in t.weights.items()]
    _emit(args, {"variables": list(t.variables), "do": do, "distribution": _table_dict(t)}, "\n".join(lines))
    return EXIT_OK


def cmd_counterexample(args) -> int:
    if args.pattern == "a":
        if args.lift is not None:
            raise UsageError("--lift applies to patterns b and c only")
        m, q = direct_path_counterexample(args.k)
    elif args.lift is None:
        m, q = chain_model(args.k, args.pattern), chain_query(args.k)
    else:
        spec = PreimageSpec.uniform(args.k, args.pattern)
        m, q = lifted_model(spec, args.lift), spec.query()
    r = evaluate_gap(m, q, {"X": 0}, {"Y": 0})
    text = model_to_text(m)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    positive = observational_joint(m).is_positive
    report = {**r.to_dict(), "query": q.to_dict(), "positive": positive}
    summary = (f"functional {r.functional}\noracle {r.oracle}\ngap {r.gap}\n"
               f"query x={','.join(sorted(q.x))} y={','.join(sorted(q.y))} z={','.join(sorted(q.z))}\n"
               f"observed joint strictly positive: {positive}")
    if args.format == "json":
        print(json.dumps({"model": None if args.out else text, "report": report}, indent=2, sort_keys=True))
    else:
        if not args.out:
            print(text)
        print(summary)
    return EXIT_OK if r.gap != 0 else EXIT_MISMATCH


def cmd_verify(args) -> int:
    wanted = None if not args.only else {int(t) for t in args.only.split(",")}
    results = [verify.run_check(c, seed=args.seed) for c in verify.CHECKS
               if wanted is None or c.number in wanted]
    if args.format == "json":
        print(json.dumps({"seed": args.seed, "results": [r.to_dict() for r in results],
                          "passed": all(r.passed for r in results)}, indent=2))
    else:
        for r in results:
            print(r.line, flush=True)
        print(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return EXIT_OK if all(r.passed for r in results) else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="frontdoor", description="Front-door identification checks with exact arithmetic.")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("dsep", parents=[common], help="d-separation verdict with an open-path witness")
    s.add_argument("graph")
    _add_query_args(s)
    s.set_defaults(func=cmd_dsep)

    s = sub.add_parser("project", parents=[common], help="latent projection")
    s.add_argument("graph")
    s.add_argument("--keep", default="", help="nodes to keep (default: all observed)")
    s.set_defaults(func=cmd_project)

    s = sub.add_parser("check", parents=[common], help="criterion report with witnesses")
    s.add_argument("graph")
    s.add_argument("--criterion", choices=(*CHECKERS, "all"), default="gfdc")
    s.add_argument("--expect", choices=("holds", "fails"))
    _add_query_args(s)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("replay", parents=[common], help="do-calculus derivation of the front-door functional")
    s.add_argument("graph")
    _add_query_args(s)
    s.set_defaults(func=cmd_replay)

    s = sub.add_parser("evaluate", parents=[common], help="front-door functional vs. intervention oracle")
    s.add_argument("model")
    _add_query_args(s)
    s.add_argument("--xstar", required=True, help="intervention values, e.g. X=0")
    s.add_argument("--expect", choices=("match", "mismatch"))
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("oracle", parents=[common], help="interventional distribution by truncated factorization")
    s.add_argument("model")
    s.add_argument("--y", required=True)
    s.add_argument("--do", required=True, help="intervention values, e.g. X=0")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("counterexample", parents=[common], help="model on which the functional is wrong")
    s.add_argument("--pattern", choices=("a", "b", "c"), required=True)
    s.add_argument("--k", type=int, default=1, help="chain length (path length for pattern a)")
    s.add_argument("--lift", type=int, help="lift to a positive pre-image model with copy probability n/(n+1)")
    s.add_argument("--out", help="write the model file here instead of stdout")
    s.set_defaults(func=cmd_counterexample)

    s = sub.add_parser("verify-paper", parents=[common], help="run the reproducibility checks")
    s.add_argument("--only", help="comma-separated check numbers")
    s.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"corpus seed (default {DEFAULT_SEED})")
    s.set_defaults(func=cmd_verify)
    return p


def _fail(code: int, kind: str, message: str) -> int:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        return _fail(EXIT_USAGE, "UsageError", str(exc))
    except ParseError as exc:
        return _fail(EXIT_PARSE, type(exc).__name__, str(exc))
    except (FrontdoorError, OSError) as exc:
        return _fail(EXIT_USAGE, type(exc).__name__, str(exc))


if __name__ == "__main__":
    sys.exit(main())
