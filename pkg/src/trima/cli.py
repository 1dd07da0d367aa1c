"""Command-line interface: build, color, check, arrow, extract, stats.

Every command prints one JSON document (or DOT / writes DIMACS on request)
that echoes the validated run configuration and the package version.
Exit codes: 0 success, 1 usage error, 2 property failure, 3 extraction
failure report, 4 budget or size guard.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .arrowing import (
    EXHAUSTIVE_LIMIT_BITS,
    UnsupportedPattern,
    arrows_exhaustive,
    arrows_sat,
    build_cnf,
    parse_target,
)
from .colorings import ColoredGraph, materialize, parse_coloring
from .core import DEFAULT_EXPLICIT_LIMIT, BudgetError, DepthError, ExplicitGraph, RegionRef, build_explicit, edge_count, face_count, vertex_count
from .detectors import BudgetExceeded, check_scheme_invariants, find_mono_cycle_ge, find_mono_hplus, find_mono_k23, iter_mono_c4
from .extractors import Budget, extract_bistar, extract_flower, extract_jellyfish
from .patterns import verify_witness

SCHEMA_VERSION = 1
CACHE_ENV = "TRIMA_CACHE_DIR"
PROPERTIES = ("no-mono-cycle-ge5", "no-mono-k23", "no-mono-hplus", "invariants")
EXIT_OK, EXIT_USAGE, EXIT_PROPERTY, EXIT_FAILURE_REPORT, EXIT_GUARD = 0, 1, 2, 3, 4


class UsageError(ValueError):
    pass


class GuardError(RuntimeError):
    pass


@dataclass
class RunConfig:
    command: str
    depth: int
    scheme: str | None = None
    pattern: str | None = None
    k: int | None = None
    engine: str | None = None
    budget: dict = field(default_factory=dict)
    output: str = "json"
    seed: int | None = None

    def validate(self) -> "RunConfig":
        if self.depth < 0:
            raise UsageError("depth must be non-negative")
        if self.scheme is not None:
            try:
                parse_coloring(self.scheme)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            if self.scheme.startswith("random:"):
                self.seed = int(self.scheme.split(":", 1)[1])
        if self.k is not None and self.k < 1:
            raise UsageError("k must be positive")
        return self


def _document(cfg: RunConfig, result: dict) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "version": __version__,
        "config": asdict(cfg),
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "result": result,
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# Serialization helpers
# ---------------------------------------------------------------------------

def graph_json(g: ExplicitGraph) -> dict:
    vs = g.vertices
    return {
        "depth": g.depth,
        "vertices": list(vs),
        "edges": [[vs[i], vs[j]] for i, j in g.edges],
        "faces": [[vs[a], vs[b], vs[c]] for a, b, c in g.faces],
    }


def graph_dot(g: ExplicitGraph, colors: bytes | None = None) -> str:
    lines = [f"graph Tr{g.depth} {{"]
    for v in g.vertices:
        lines.append(f'  "{v}";')
    for e, (i, j) in enumerate(g.edges):
        attr = "" if colors is None else f' [color={"red" if colors[e] else "blue"}, label={colors[e]}]'
        lines.append(f'  "{g.vertices[i]}" -- "{g.vertices[j]}"{attr};')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _explicit(depth: int) -> ExplicitGraph:
    try:
        return build_explicit(depth, DEFAULT_EXPLICIT_LIMIT)
    except BudgetError as exc:
        raise GuardError(str(exc)) from None


def _colored(depth: int, scheme: str) -> ColoredGraph:
    oracle = parse_coloring(scheme)
    try:
        return materialize(depth, oracle, DEFAULT_EXPLICIT_LIMIT)
    except BudgetError as exc:
        raise GuardError(str(exc)) from None


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_build(args) -> tuple[int, str]:
    cfg = RunConfig("build", args.depth, output=args.format).validate()
    g = _explicit(args.depth)
    if args.format == "dot":
        return EXIT_OK, graph_dot(g)
    return EXIT_OK, dumps(_document(cfg, graph_json(g)))


def cmd_color(args) -> tuple[int, str]:
    cfg = RunConfig("color", args.depth, scheme=args.scheme, output=args.emit).validate()
    cg = _colored(args.depth, args.scheme)
    if args.emit == "dot":
        return EXIT_OK, graph_dot(cg.graph, cg.colors)
    res = graph_json(cg.graph)
    res["colors"] = dict(sorted(cg.edge_color_map().items()))
    res["coloring"] = cg.descriptor
    return EXIT_OK, dumps(_document(cfg, res))


def cmd_check(args) -> tuple[int, str]:
    cfg = RunConfig("check", args.depth, scheme=args.scheme, pattern=args.property).validate()
    cg = _colored(args.depth, args.scheme)
    res: dict = {"property": args.property}
    if args.property == "invariants":
        if args.scheme not in ("a", "b"):
            raise UsageError("invariants need --scheme a or b")
        rep = check_scheme_invariants(cg, args.scheme)
        res["report"] = rep.to_json()
        ok = rep.passed
    else:
        try:
            if args.property == "no-mono-cycle-ge5":
                w = find_mono_cycle_ge(cg, 5)
            elif args.property == "no-mono-k23":
                w = find_mono_k23(cg)
            else:
                w = find_mono_hplus(cg)
        except BudgetExceeded as exc:
            raise GuardError(str(exc)) from None
        ok = w is None
        res["counterexample"] = None if w is None else w.to_json()
    res["passed"] = ok
    return (EXIT_OK if ok else EXIT_PROPERTY), dumps(_document(cfg, res))


def _cache_path(key: dict) -> Path | None:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    digest = hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()[:24]
    return Path(root) / f"arrow-{digest}.json"


def cmd_arrow(args) -> tuple[int, str]:
    cfg = RunConfig("arrow", args.depth, pattern=args.target, engine=args.engine,
                    budget={"seconds": args.budget}).validate()
    try:
        p = parse_target(args.target)
    except UnsupportedPattern as exc:
        raise UsageError(str(exc)) from None
    if args.export_dimacs:
        cnf = build_cnf(_explicit(args.depth), p, symmetry=False)
        cnf.write(args.export_dimacs)
    key = {"n": args.depth, "target": args.target, "engine": args.engine, "budget": args.budget}
    cache = _cache_path(key)
    if cache is not None and cache.exists():
        res = json.loads(cache.read_text())
    else:
        if args.engine == "exhaustive":
            g = _explicit(args.depth)
            if g.n_edges > EXHAUSTIVE_LIMIT_BITS:
                raise GuardError(f"2^{g.n_edges} colorings exceed the exhaustive limit")
            r = arrows_exhaustive(args.depth, p)
        else:
            _explicit(args.depth)
            r = arrows_sat(args.depth, p, budget=args.budget)
        res = r.to_json()
        # wall-clock figures vary between runs; keep them out of the document
        res["evidence"] = {k: v for k, v in res["evidence"].items() if k not in ("seconds", "time")}
        if cache is not None and r.status != "unknown":
            cache.parent.mkdir(parents=True, exist_ok=True)
            cache.write_text(json.dumps(res, sort_keys=True))
    if args.export_dimacs:
        res["dimacs"] = str(args.export_dimacs)
    code = EXIT_GUARD if res["status"] == "unknown" else EXIT_OK
    return code, dumps(_document(cfg, res))


def _parse_target_k(text: str) -> tuple[str, int]:
    try:
        name, k = text.split(":")
        k = int(k)
    except ValueError:
        raise UsageError(f"target must look like flower:K, got {text!r}") from None
    if name not in ("flower", "jellyfish", "bistar"):
        raise UsageError(f"unknown extraction target {name!r}")
    return name, k


def cmd_extract(args) -> tuple[int, str]:
    name, k = _parse_target_k(args.target)
    depth = args.depth if args.depth is not None else {"flower": 38 * k, "jellyfish": 100 * k,
                                                       "bistar": 6 * k + 30}[name]
    budget = Budget(max_region_depth=args.budget_depth, max_queries=args.max_queries,
                    wall_clock=args.wall_clock, verify_depth=args.verify_depth)
    cfg = RunConfig("extract", depth, scheme=args.coloring, pattern=name, k=k,
                    budget=budget.to_json()).validate()
    oracle = parse_coloring(args.coloring, depth)
    try:
        if name == "flower":
            out = extract_flower(oracle, RegionRef.root(depth), k, budget)
        elif name == "jellyfish":
            out = extract_jellyfish(oracle, k, budget, depth)
        else:
            out = extract_bistar(oracle, k, budget, depth)
    except DepthError as exc:
        raise GuardError(str(exc)) from None
    res = out.to_json()
    if args.verify and hasattr(out, "witness"):
        verdict = verify_witness((oracle, depth), out.witness)
        res["verified"] = verdict.ok
        if not verdict.ok:
            res["diagnostic"] = verdict.diagnostic
            return EXIT_PROPERTY, dumps(_document(cfg, res))
    code = EXIT_FAILURE_REPORT if out.kind == "failure_report" else EXIT_OK
    return code, dumps(_document(cfg, res))


def cmd_stats(args) -> tuple[int, str]:
    cfg = RunConfig("stats", args.depth, scheme=args.scheme).validate()
    n = args.depth
    res: dict = {
        "closed_form": {"vertices": vertex_count(n), "edges": edge_count(n), "inner_faces": face_count(n)},
    }
    if n <= DEFAULT_EXPLICIT_LIMIT:
        g = _explicit(n)
        degs = sorted(len(a) for a in g.adjacency)
        res["explicit"] = {"vertices": g.n_vertices, "edges": g.n_edges, "inner_faces": len(g.faces),
                           "min_degree": degs[0], "max_degree": degs[-1]}
    if args.scheme:
        cg = _colored(n, args.scheme)
        classes = {}
        for c in (0, 1):
            c4 = sum(1 for col, _ in iter_mono_c4(cg, c))
            classes[str(c)] = {"edges": cg.colors.count(c), "mono_c4": c4}
        res["color_classes"] = classes
    return EXIT_OK, dumps(_document(cfg, res))


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="trima", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"trima {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="materialize Tr(n)")
    b.add_argument("--depth", type=int, required=True)
    b.add_argument("--format", choices=("json", "dot"), default="json")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("color", help="color Tr(n) with a scheme or seeded oracle")
    c.add_argument("--depth", type=int, required=True)
    c.add_argument("--scheme", required=True, help="a, b, random:SEED or const:C")
    c.add_argument("--emit", choices=("json", "dot"), default="json")
    c.set_defaults(func=cmd_color)

    k = sub.add_parser("check", help="check an avoidance property of a colored Tr(n)")
    k.add_argument("--depth", type=int, required=True)
    k.add_argument("--scheme", required=True)
    k.add_argument("--property", choices=PROPERTIES, required=True)
    k.set_defaults(func=cmd_check)

    a = sub.add_parser("arrow", help="decide Tr(n) -> target")
    a.add_argument("--target", required=True, help="c3, c4, c5 or k23")
    a.add_argument("--depth", type=int, required=True)
    a.add_argument("--engine", choices=("exhaustive", "dpll"), default="dpll")
    a.add_argument("--export-dimacs", type=Path, default=None)
    a.add_argument("--budget", type=float, default=60.0, help="solver time budget in seconds")
    a.set_defaults(func=cmd_arrow)

    e = sub.add_parser("extract", help="replay a proof and extract a witness")
    e.add_argument("--target", required=True, help="flower:K, jellyfish:K or bistar:K")
    e.add_argument("--depth", type=int, default=None)
    e.add_argument("--coloring", required=True, help="random:SEED, a or b")
    e.add_argument("--budget-depth", type=int, default=17)
    e.add_argument("--verify-depth", type=int, default=8)
    e.add_argument("--max-queries", type=int, default=5_000_000)
    e.add_argument("--wall-clock", type=float, default=60.0)
    e.add_argument("--verify", action="store_true", help="re-verify the witness against the oracle")
    e.set_defaults(func=cmd_extract)

    s = sub.add_parser("stats", help="counts for Tr(n) and optional color classes")
    s.add_argument("--depth", type=int, required=True)
    s.add_argument("--scheme", default=None)
    s.set_defaults(func=cmd_stats)
    return ap


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        code, text = args.func(args)
    except UsageError as exc:
        print(f"trima: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GuardError as exc:
        print(f"trima: size or budget guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    out.write(text if text.endswith("\n") else text + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
