"""Command line front end.  Every subcommand prints one JSON report (or a
table rendering of it) and exits 0 ok, 1 domain error, 2 resource or budget
exhausted, 3 failed verification."""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import exact_linalg as la
from .errors import DomainError, PflabError
from .families import FAMILIES, generate
from .graph_core import (
    Graph,
    enumerate_perfect_matchings,
    format_graph,
    is_matchable,
    make_cut,
    parse_graph,
    tight_cut_decomposition,
)
from .orientation import (
    KOrientation,
    pfaffian_number,
    signature_matrix,
    solve_pfaffian_system,
    split_orientation_at_cut,
)
from .suites import SUITES
from .symbolic import (
    count_via_symbolic,
    labeling_from_korientation,
    symbolic_from_korientation,
    symbolic_obstruction,
)


# ------------------------------------------------------------------ inputs


def _parse_family_spec(spec: str) -> Graph:
    _, _, rest = spec.partition(":")
    name, _, params = rest.partition(":")
    try:
        values = [int(p) for p in params.split(",") if p.strip()]
    except ValueError:
        raise DomainError(f"bad family parameters in {spec!r}") from None
    return generate(name, values)


def load_graph(arg: str) -> Graph:
    """A file path, ``-`` for standard input, or ``family:NAME:P1,P2``."""
    if arg.startswith("family:"):
        return _parse_family_spec(arg)
    if arg == "-":
        return parse_graph(sys.stdin.read())
    try:
        text = Path(arg).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read graph file {arg!r}: {exc.strerror}") from None
    return parse_graph(text)


def load_korientation(g: Graph, path: str) -> KOrientation:
    """A JSON list of bit strings, an object with a ``korientation`` list,
    or a ``pfnum`` report (its witness is used)."""
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise DomainError(f"cannot read k-orientation file {path!r}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise DomainError(f"k-orientation file is not JSON: {exc}") from None
    if isinstance(data, dict):
        if "korientation" in data:
            data = data["korientation"]
        elif isinstance(data.get("result"), dict) and data["result"].get("witness"):
            data = data["result"]["witness"]
    if not isinstance(data, list) or not all(isinstance(b, str) for b in data):
        raise DomainError("k-orientation must be a list of bit strings")
    return KOrientation.from_bits(g, data)


def parse_shore(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise DomainError(f"bad shore {text!r}; expected comma separated vertices") from None


# ----------------------------------------------------------------- reports


def _summary(g: Graph) -> dict:
    return {"n": g.n, "m": g.m, "matchings": len(enumerate_perfect_matchings(g)) if g.n % 2 == 0 else 0}


def _matching_json(m) -> list[int]:
    return sorted(m)


def _fractions(xs) -> list[str]:
    return [la.fraction_str(x) for x in xs]


def cmd_matchings(args) -> tuple[dict, int]:
    g = load_graph(args.graph)
    matchable = g.n % 2 == 0 and is_matchable(g)
    ms = enumerate_perfect_matchings(g) if matchable else []
    result = {"count": len(ms), "matchable": matchable}
    if args.list:
        result["matchings"] = [_matching_json(m) for m in ms]
    return {"input": _summary(g), "result": result}, 0


def cmd_pfnum(args) -> tuple[dict, int]:
    g = load_graph(args.graph)
    res = pfaffian_number(g, k_budget=args.k_budget, time_budget=args.time_budget, jobs=args.jobs)
    result = {
        "k": res.k,
        "status": res.status,
        "classes": res.classes,
        "distinct_vectors": res.distinct_vectors,
        "class_indices": list(res.class_indices),
        "witness": res.witness.bits() if res.witness else None,
        "alpha": _fractions(res.alpha) if res.alpha else None,
    }
    if res.status == "lower_bound_only":
        result["note"] = f"budget exhausted; pf >= {res.k}"
    return {"input": _summary(g), "result": result}, 0 if res.status == "exact" else 2


def cmd_symbolic_count(args) -> tuple[dict, int]:
    g = load_graph(args.graph)
    kd = load_korientation(g, args.korientation)
    if solve_pfaffian_system(signature_matrix(kd)) is None:
        result = {"pfaffian": False, "obstruction": _non_pfaffian_pair(kd)}
        return {"input": _summary(g), "result": result, "error": "k-orientation is not pfaffian"}, 1
    d0, lab = symbolic_from_korientation(kd)
    count = count_via_symbolic(d0, lab) if g.is_simple() else None
    expected = len(enumerate_perfect_matchings(g))
    result = {
        "pfaffian": True,
        "d": lab.d,
        "orientation": d0.bits(),
        "labeling": lab.to_json(),
        "count": count,
        "enumerated": expected,
        "agrees": count is None or count == expected,
    }
    if not g.is_simple():
        result["note"] = "multigraph: symbolic matrix undefined, count skipped"
    return {"input": _summary(g), "result": result}, 0 if result["agrees"] else 3


def _non_pfaffian_pair(kd: KOrientation):
    """Matchings (M, N) with equal labels but different signs under the
    symbolic orientation built from kd, when there is such a pair."""
    pair = symbolic_obstruction(*labeling_from_korientation(kd))
    return None if pair is None else [_matching_json(pair[0]), _matching_json(pair[1])]


def cmd_split(args) -> tuple[dict, int]:
    g = load_graph(args.graph)
    kd = load_korientation(g, args.korientation)
    c = make_cut(g, parse_shore(args.shore))
    res = split_orientation_at_cut(g, c, kd)
    result = {
        "cut": {"shore": sorted(c.shore), "edges": sorted(c.edges)},
        "anchor_edge": res.anchor_edge,
        "anchor_matching": _matching_json(res.anchor_matching),
        "reversal_shores": [sorted(s) for s in res.shores],
        "paths": {str(w): {"vertices": list(v), "edges": list(e)} for w, (v, e) in sorted(res.paths.items())},
        "korientation": res.result.bits(),
        "alpha_shore_contracted_complement": _fractions(res.alpha_inner),
        "alpha_shore_contracted": _fractions(res.alpha_outer),
        "verified": True,
    }
    return {"input": _summary(g), "result": result}, 0


def cmd_decompose(args) -> tuple[dict, int]:
    g = load_graph(args.graph)
    dec = tight_cut_decomposition(g, seed=args.seed)
    pieces = [{"kind": p.kind, "n": p.graph.n, "m": p.graph.m, "edges": [list(e) for e in p.graph.edges]} for p in dec.pieces]
    result = {
        "bricks": len(dec.bricks),
        "braces": len(dec.braces),
        "pieces": pieces,
        "cuts_used": [sorted(s) for s in dec.cuts_used],
    }
    return {"input": _summary(g), "result": result}, 0


def cmd_generate(args) -> tuple[dict | str, int]:
    return format_graph(generate(args.family, args.params)), 0


def cmd_verify(args) -> tuple[dict, int]:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    reports = []
    for name in names:
        kwargs = {"seed": args.seed}
        if args.include_slow and name in ("khatri-rao", "symbolic"):
            kwargs["include_slow"] = True
        reports.append(SUITES[name](**kwargs))
    passed = all(r["passed"] for r in reports)
    return {"result": {"suites": reports, "passed": passed}}, 0 if passed else 3


# --------------------------------------------------------------- rendering


def render_table(report: dict) -> str:
    """Flatten the JSON report into ``path<TAB>value`` lines."""
    lines = []

    def walk(prefix, node):
        if isinstance(node, dict) and node:
            for k, v in node.items():
                walk(f"{prefix}.{k}" if prefix else str(k), v)
        elif isinstance(node, list) and node and any(isinstance(x, (dict, list)) for x in node):
            for i, v in enumerate(node):
                walk(f"{prefix}[{i}]", v)
        else:
            lines.append(f"{prefix}\t{json.dumps(node)}")

    walk("", report)
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pflab", description="Pfaffian numbers and related computations on small graphs.")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--timings", action="store_true", help="add wall-clock time to the report")
    # the same options after the subcommand; SUPPRESS keeps the top-level value
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default=argparse.SUPPRESS)
    common.add_argument("--timings", action="store_true", default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    graph_help = "graph file, '-' for stdin, or family:NAME:P1,P2"

    s = sub.add_parser("matchings", parents=[common], help="count perfect matchings")
    s.add_argument("graph", help=graph_help)
    s.add_argument("--list", action="store_true")
    s.set_defaults(func=cmd_matchings)

    s = sub.add_parser("pfnum", parents=[common], help="pfaffian number with a verified witness")
    s.add_argument("graph", help=graph_help)
    s.add_argument("--k-budget", type=int)
    s.add_argument("--time-budget", type=float)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_pfnum)

    s = sub.add_parser("symbolic-count", parents=[common], help="count matchings through the symbolic pfaffian")
    s.add_argument("graph", help=graph_help)
    s.add_argument("korientation", help="JSON file: list of bit strings or a pfnum report")
    s.set_defaults(func=cmd_symbolic_count)

    s = sub.add_parser("split", parents=[common], help="split a pfaffian k-orientation at a separating cut")
    s.add_argument("graph", help=graph_help)
    s.add_argument("--shore", required=True, help="comma separated vertices")
    s.add_argument("korientation", help="JSON file: list of bit strings or a pfnum report")
    s.set_defaults(func=cmd_split)

    s = sub.add_parser("decompose", parents=[common], help="tight cut decomposition")
    s.add_argument("graph", help=graph_help)
    s.add_argument("--seed", type=int)
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("generate", parents=[common], help="emit a family member in edge-list format")
    s.add_argument("family", choices=sorted(FAMILIES))
    s.add_argument("params", type=int, nargs="*")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("suite", choices=[*SUITES, "all"])
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--include-slow", action="store_true")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        payload, code = args.func(args)
    except PflabError as exc:
        payload, code = {"error": {"type": type(exc).__name__, "message": str(exc)}}, exc.exit_code
        print(f"pflab: {exc}", file=sys.stderr)
    except TimeoutError as exc:
        payload, code = {"error": {"type": "TimeoutError", "message": str(exc) or "time budget exhausted"}}, 2
    if isinstance(payload, str):
        sys.stdout.write(payload)
        return code
    report = {"command": argv, **payload, "exit_code": code}
    if args.timings:
        report["timings"] = {"seconds": round(time.perf_counter() - start, 6)}
    if args.format == "table":
        sys.stdout.write(render_table(report))
    else:
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
