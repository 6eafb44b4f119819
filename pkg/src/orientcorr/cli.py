"""Command-line front end.

Exit codes: 0 every check held, 1 usage or input error, 2 a theorem-backed
check failed (a software defect), 3 a bunkbed violation (conjecture finding).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from itertools import combinations
from pathlib import Path

from . import __version__
from .clusters import (
    cluster_distribution_bruteforce,
    joint_distribution_bruteforce,
    recursive_law,
)
from .events import (
    EdgeUpwardFamily,
    UpwardClosedFamily,
    ZeroProbabilityCondition,
    parse_event,
)
from .exact import format_rational, parse_rational
from .graph import Graph, GraphError, members, parse_edge_list
from .models import CapExceeded, parse_model
from .montecarlo import estimate_event
from .verify import (
    SIGN_MODES,
    InequalityReport,
    SweepResult,
    bunkbed_check,
    search_correlation_signs,
    verify_corollaries,
    verify_harris_classical,
    verify_lemma1,
    verify_lemma2,
    verify_mixed_model,
    verify_oriented_harris,
    verify_oriented_vdbhk,
)

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION, EXIT_CONJECTURE = 0, 1, 2, 3
VERIFY_CLAIMS = ("lemma1", "lemma2", "harris", "oriented-harris", "oriented-vdbhk", "corollaries", "mixed")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--max-states", type=int, default=None)


def _graph_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", required=True, help="edge-list file")
    for v in ("u", "v", "w", "s", "a", "b", "t"):
        p.add_argument(f"--{v}")
    p.add_argument("--p", type=_rational)
    p.add_argument("--pp", type=_rational, help="mixed-model split probability")
    p.add_argument("--x", default="", help="comma-separated vertex list")
    p.add_argument("--y", default="", help="comma-separated vertex list")
    p.add_argument("--event", action="append", default=[])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="orientcorr", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    verify = sub.add_parser("verify", help="check one claim on a graph")
    verify.add_argument("claim", choices=VERIFY_CLAIMS)
    _graph_flags(verify)
    _common(verify)

    dist = sub.add_parser("dist", help="print a cluster law")
    _graph_flags(dist)
    dist.add_argument("--model", default="o")
    dist.add_argument("--recursive", action="store_true", help="edge-percolation recursion at --p")
    _common(dist)

    search = sub.add_parser("search", help="exhaustive searches")
    search.add_argument("what", choices=("signs",))
    search.add_argument("--n", type=int, required=True)
    search.add_argument("--mode", choices=SIGN_MODES, default="a_to_s")
    search.add_argument("--conditioned", action="store_true")
    _common(search)

    bunk = sub.add_parser("bunkbed", help="bunkbed inequality on G x K2")
    _graph_flags(bunk)
    _common(bunk)

    mc = sub.add_parser("mc", help="Monte Carlo estimate")
    _graph_flags(mc)
    mc.add_argument("--model", required=True)
    mc.add_argument("--samples", type=int, default=100_000)
    mc.add_argument("--seed", type=int, default=0)
    _common(mc)
    return parser


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + m for m in missing))


def _vertices(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _families(g: Graph, args, s: str) -> list[tuple[UpwardClosedFamily, UpwardClosedFamily]]:
    """Event pairs for the oriented checks: the two --event flags, or every
    pair of single-generator families rooted at s."""
    si = g.index(s)
    if args.event:
        if len(args.event) != 2:
            raise UsageError("give exactly two --event flags (or none to sweep)")
        fams = []
        for text in args.event:
            f = parse_event(g, text)
            if text.strip() == "true":
                f = UpwardClosedFamily(si, (0,))
            if not isinstance(f, UpwardClosedFamily):
                raise UsageError(f"event {text!r} is not an out-cluster increasing family")
            if f.root != si:
                raise UsageError(f"event {text!r} is not rooted at {s}")
            fams.append(f)
        return [tuple(fams)]
    others = [v for v in range(g.n) if v != si]
    gens = [sum(1 << v for v in c) for k in range(len(others) + 1) for c in combinations(others, k)]
    singles = [UpwardClosedFamily(si, (x,)) for x in gens]
    return [(a, b) for a in singles for b in singles]


def _run_verify(g: Graph, args) -> list:
    kw = dict(max_states=args.max_states, threads=args.threads)
    claim = args.claim
    if claim == "lemma1":
        _need(args, "p")
        roots = [args.u] if args.u else list(g.vertices)
        return verify_lemma1(g, roots[0], args.p, roots=roots, **kw)
    if claim == "lemma2":
        _need(args, "p")
        w = args.w or args.v
        if args.u and w:
            pairs = [(args.u, w)]
        elif args.u or w:
            raise UsageError("lemma2 needs both --u and --v (or neither)")
        else:
            pairs = [(a, b) for a in g.vertices for b in g.vertices if a != b]
        if not pairs:
            return []
        return verify_lemma2(g, pairs[0][0], pairs[0][1], args.p, pairs=pairs, **kw)
    if claim == "harris":
        _need(args, "p")
        if args.event:
            if len(args.event) != 2:
                raise UsageError("give exactly two --event flags (or none to sweep)")
            fams = [parse_event(g, e) for e in args.event]
            if not all(isinstance(f, EdgeUpwardFamily) for f in fams):
                raise UsageError("harris events must be edge events like 'edges:0,1'")
            pairs = [tuple(fams)]
        else:
            singles = [EdgeUpwardFamily((x,)) for x in range(1 << g.m)]
            pairs = [(a, b) for a in singles for b in singles]
        return [verify_harris_classical(g, args.p, a, b, **kw) for a, b in pairs]
    if claim == "oriented-harris":
        _need(args, "s")
        return [verify_oriented_harris(g, args.s, a, b, **kw) for a, b in _families(g, args, args.s)]
    if claim == "oriented-vdbhk":
        _need(args, "s")
        x, y = _vertices(args.x), _vertices(args.y)
        return [
            verify_oriented_vdbhk(g, args.s, a, b, x, y, **kw)
            for a, b in _families(g, args, args.s)
        ]
    if claim == "corollaries":
        _need(args, "s", "a", "b", "t")
        return verify_corollaries(g, args.s, args.a, args.b, args.t, **kw)
    if claim == "mixed":
        _need(args, "pp", "p")
        roots = [args.u] if args.u else list(g.vertices)
        return verify_mixed_model(g, roots[0], args.pp, args.p, roots=roots, **kw)
    raise UsageError(f"unknown claim {claim}")


def _run_dist(g: Graph, args) -> list:
    _need(args, "u")
    if args.recursive:
        _need(args, "p")
        return [recursive_law(g, args.u, args.p)]
    model = parse_model(args.model)
    w = args.w or args.v
    if w:
        return [joint_distribution_bruteforce(g, model, args.u, w, args.max_states, args.threads)]
    return [cluster_distribution_bruteforce(g, model, args.u, args.max_states, args.threads)]


def _run_bunkbed(g: Graph, args) -> list:
    _need(args, "p")
    us = [args.u] if args.u else list(g.vertices)
    vs = [args.v] if args.v else list(g.vertices)
    return [
        bunkbed_check(g, u, v, args.p, args.max_states, args.threads) for u in us for v in vs
    ]


def _run_mc(g: Graph, args) -> list:
    if len(args.event) != 1:
        raise UsageError("mc needs exactly one --event")
    pred = parse_event(g, args.event[0])
    return [estimate_event(g, parse_model(args.model), pred, args.samples, args.seed, args.threads)]


def _digest(args, graph_text: str | None) -> str:
    payload = {k: v for k, v in sorted(vars(args).items()) if k not in ("format", "threads")}
    payload = {k: format_rational(v) if isinstance(v, Fraction) else v for k, v in payload.items()}
    payload["graph_text"] = graph_text
    blob = json.dumps(payload, sort_keys=True, default=str).encode()
    return "sha256:" + hashlib.sha256(blob).hexdigest()


def _summary(entries) -> dict:
    out = {"checked": 0, "held": 0, "violated": 0, "skipped": 0, "findings": 0, "estimates": 0}
    for e in entries:
        if isinstance(e, InequalityReport):
            out["checked"] += 1
            out["held" if e.holds else "violated"] += 1
        elif isinstance(e, SweepResult):
            out["checked"] += e.checked
            out["held"] += e.held
            out["violated"] += len(e.violations)
            out["skipped"] += e.skipped
        elif hasattr(e, "covariance"):
            out["findings"] += 1
        elif hasattr(e, "estimate"):
            out["estimates"] += 1
    return out


def exit_code(entries) -> int:
    theorem = conjecture = False
    for e in entries:
        if isinstance(e, InequalityReport):
            if not e.holds:
                conjecture |= e.conjecture
                theorem |= not e.conjecture
            if e.notes.get("crosscheck") is False:
                theorem = True
        elif isinstance(e, SweepResult) and e.violations:
            theorem = True
    if theorem:
        return EXIT_VIOLATION
    return EXIT_CONJECTURE if conjecture else EXIT_OK


def _text_line(e) -> str:
    if isinstance(e, InequalityReport):
        binds = " ".join(f"{k}={v}" for k, v in e.instance.items() if k != "graph")
        status = "PASS" if e.holds else ("FINDING" if e.conjecture else "FAIL")
        return f"{status} {e.name} {binds} lhs={format_rational(e.lhs)} {e.relation} rhs={format_rational(e.rhs)}"
    if hasattr(e, "covariance"):
        binds = " ".join(f"{k}={v}" for k, v in e.bindings.items())
        v = e.graph.vertices
        edges = " ".join(f"{v[i]}-{v[j]}" for i, j in e.graph.edges)
        return f"{e.sign.upper()} [{edges}] {binds} cov={format_rational(e.covariance)}"
    if hasattr(e, "estimate"):
        return f"ESTIMATE {e.estimate:.6f} +- {e.standard_error:.6f} ({e.samples} samples, seed {e.seed})"
    return json.dumps(e.to_json(), sort_keys=True)


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    start = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        graph_text = None
        g = None
        if getattr(args, "graph", None):
            try:
                graph_text = Path(args.graph).read_text(encoding="utf-8")
            except OSError as e:
                raise UsageError(f"cannot read graph file: {e}") from None
            g = parse_edge_list(graph_text)
        if getattr(args, "threads", 1) < 1:
            raise UsageError("--threads must be at least 1")
        if args.command == "verify":
            entries = _run_verify(g, args)
        elif args.command == "dist":
            entries = _run_dist(g, args)
        elif args.command == "search":
            entries = search_correlation_signs(args.n, args.mode, args.conditioned)
        elif args.command == "bunkbed":
            entries = _run_bunkbed(g, args)
        else:
            entries = _run_mc(g, args)
    except (UsageError, GraphError, CapExceeded, ZeroProbabilityCondition, ValueError) as e:
        print(f"orientcorr: error: {e}", file=sys.stderr)
        return EXIT_INPUT

    code = exit_code(entries)
    command = args.command + (" " + args.claim if args.command == "verify" else "")
    if args.command == "search":
        command += " " + args.what
    report = {
        "tool": "orientcorr",
        "version": __version__,
        "subcommand": command,
        "input_digest": _digest(args, graph_text),
        "entries": [e.to_json() for e in entries],
        "summary": _summary(entries),
        "exit_code": code,
        "wall_time_s": round(time.perf_counter() - start, 6),
    }
    if args.format == "json":
        json.dump(report, out, indent=2, sort_keys=False)
        out.write("\n")
    else:
        for e in entries:
            out.write(_text_line(e) + "\n")
        s = report["summary"]
        out.write(
            f"{command}: checked={s['checked']} held={s['held']} violated={s['violated']} "
            f"skipped={s['skipped']} findings={s['findings']} exit={code}\n"
        )
    return code


def main() -> None:
    sys.exit(run())
