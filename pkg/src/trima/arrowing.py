"""Decide Tr(n) -> H for small targets.

Every embedded copy of the target contributes two clauses ("not all edges
0", "not all edges 1") over one boolean per edge id.  A satisfying
assignment is an avoidance coloring; unsatisfiability means every coloring
contains a monochromatic copy.  Global color swap is factored out by fixing
the O0-O1 edge to color 0.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .colorings import ColoredGraph
from .core import ExplicitGraph, build_explicit, edge_key
from .detectors import find_mono_c4, find_mono_cycle, find_mono_k23
from .patterns import K23, Cycle, TargetPattern, Witness
from .sat import CnfFormula, solve

EXHAUSTIVE_LIMIT_BITS = 25
SUPPORTED = ("C3", "C4", "C5", "K23")


class UnsupportedPattern(ValueError):
    pass


def pattern_code(p: TargetPattern) -> str:
    if p.kind == "cycle" and p.k in (3, 4, 5):
        return f"C{p.k}"
    if p.kind == "k23":
        return "K23"
    raise UnsupportedPattern(f"arrowing does not support {p}")


def parse_target(text: str) -> TargetPattern:
    t = text.strip().lower()
    if t in ("c3", "c4", "c5"):
        return Cycle(int(t[1]))
    if t in ("k23", "k2,3"):
        return K23
    raise UnsupportedPattern(f"unknown target {text!r}")


# ---------------------------------------------------------------------------
# Copies
# ---------------------------------------------------------------------------

def _cycles(g: ExplicitGraph, k: int) -> list[tuple[int, ...]]:
    """Vertex sequences of all k-cycles, each once (min vertex first, then
    the smaller of its two cycle neighbors)."""
    adj = g.adjacency
    out = []
    for s in range(g.n_vertices):
        path = [s]

        def grow() -> None:
            last = path[-1]
            if len(path) == k:
                if g.has_edge(last, s) and path[1] < last:
                    out.append(tuple(path))
                return
            for y in adj[last]:
                if y > s and y not in path:
                    path.append(y)
                    grow()
                    path.pop()

        grow()
    return out


def enumerate_copies(g: ExplicitGraph, p: TargetPattern) -> list[tuple[int, ...]]:
    """Edge-id sets (sorted tuples) of every copy of ``p`` in ``g``, each once."""
    code = pattern_code(p)
    copies: list[tuple[int, ...]] = []
    if code.startswith("C"):
        k = int(code[1])
        for cyc in _cycles(g, k):
            copies.append(tuple(sorted(g.edge_id(cyc[i], cyc[(i + 1) % k]) for i in range(k))))
    else:
        adj = g.adjacency
        for x1 in range(g.n_vertices):
            common: dict[int, list[int]] = {}
            for a in adj[x1]:
                for x2 in adj[a]:
                    if x2 > x1:
                        common.setdefault(x2, []).append(a)
            for x2 in sorted(common):
                mids = sorted(common[x2])
                m = len(mids)
                for i in range(m):
                    for j in range(i + 1, m):
                        for l in range(j + 1, m):
                            es = [g.edge_id(x, y) for x in (x1, x2) for y in (mids[i], mids[j], mids[l])]
                            copies.append(tuple(sorted(es)))
    return copies


def fixed_edge(g: ExplicitGraph) -> int:
    """Edge whose color is fixed to 0 to break the color-swap symmetry."""
    i, j = g.index["O0"], g.index["O1"]
    return g.edge_id(i, j)


def build_cnf(g: ExplicitGraph, p: TargetPattern, symmetry: bool = True) -> CnfFormula:
    """Variable ``e+1`` is true when edge ``e`` has color 1."""
    copies = enumerate_copies(g, p)
    f = CnfFormula(g.n_edges)
    f.comments.append(f"trima arrowing n={g.depth} pattern={pattern_code(p)} copies={len(copies)}")
    for e in range(g.n_edges):
        u, v = g.edge_labels(e)
        f.comments.append(f"var {e + 1} = {edge_key(u, v)}")
    for cp in copies:
        f.add([e + 1 for e in cp])
        f.add([-(e + 1) for e in cp])
    if symmetry:
        f.add([-(fixed_edge(g) + 1)])
    return f


# ---------------------------------------------------------------------------
# Results
# ---------------------------------------------------------------------------

@dataclass
class ArrowingResult:
    status: str  # "arrows", "not_arrows" or "unknown"
    n: int
    pattern: str
    engine: str
    evidence: dict = field(default_factory=dict)
    certificate: ColoredGraph | None = None

    def to_json(self) -> dict:
        d = {"status": self.status, "n": self.n, "pattern": self.pattern,
             "engine": self.engine, "evidence": self.evidence}
        if self.certificate is not None:
            d["certificate"] = dict(sorted(self.certificate.edge_color_map().items()))
        return d


def detect(cg: ColoredGraph, p: TargetPattern) -> Witness | None:
    """Monochromatic copy of ``p`` under ``cg`` found by the detectors."""
    code = pattern_code(p)
    if code == "C4":
        return find_mono_c4(cg)
    if code == "K23":
        return find_mono_k23(cg)
    return find_mono_cycle(cg, int(code[1]))


def _certificate(g: ExplicitGraph, p: TargetPattern, colors, descriptor: dict) -> ColoredGraph:
    cg = ColoredGraph(g, colors, descriptor)
    hit = detect(cg, p)
    if hit is not None:
        raise AssertionError(f"avoidance certificate contains a monochromatic {p}: {hit.roles}")
    return cg


def arrows_exhaustive(n: int, p: TargetPattern) -> ArrowingResult:
    """Try every coloring (with the fixed edge at 0) in ascending bit order."""
    code = pattern_code(p)
    g = build_explicit(n)
    m = g.n_edges
    if m > EXHAUSTIVE_LIMIT_BITS:
        raise ValueError(f"2^{m} colorings exceed the exhaustive limit 2^{EXHAUSTIVE_LIMIT_BITS}")
    copies = enumerate_copies(g, p)
    fixed = fixed_edge(g)
    free = [e for e in range(m) if e != fixed]
    masks = np.array([sum(1 << e for e in cp) for cp in copies], dtype=np.uint64)
    total = 1 << len(free)
    chunk = 1 << 16
    weights = np.array([1 << e for e in free], dtype=np.uint64)
    t0 = time.monotonic()
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.uint64)
        bits = (idx[:, None] >> np.arange(len(free), dtype=np.uint64)) & np.uint64(1)
        colorings = (bits * weights).sum(axis=1, dtype=np.uint64)
        ok = np.ones(len(idx), dtype=bool)
        for mk in masks:
            hit = colorings & mk
            ok &= (hit != 0) & (hit != mk)
        if ok.any():
            x = int(colorings[int(np.argmax(ok))])
            cols = [(x >> e) & 1 for e in range(m)]
            cert = _certificate(g, p, cols, {"kind": "exhaustive", "n": n, "pattern": code})
            return ArrowingResult("not_arrows", n, code, "exhaustive",
                                  {"index": start + int(np.argmax(ok)), "copies": len(copies)}, cert)
    return ArrowingResult("arrows", n, code, "exhaustive",
                          {"colorings_checked": total, "copies": len(copies), "fixed_edge": edge_key(*g.edge_labels(fixed)),
                           "seconds": round(time.monotonic() - t0, 3)})


def arrows_sat(n: int, p: TargetPattern, budget: float | None = 60.0,
               max_conflicts: int | None = None) -> ArrowingResult:
    """Encode and solve; a model becomes a detector-checked certificate."""
    code = pattern_code(p)
    g = build_explicit(n)
    cnf = build_cnf(g, p)
    res = solve(cnf, time_budget=budget, max_conflicts=max_conflicts)
    ev = {"variables": cnf.n_vars, "clauses": len(cnf.clauses), **res.stats}
    if res.status == "sat":
        cols = [1 if b else 0 for b in res.model]
        cert = _certificate(g, p, cols, {"kind": "dpll", "n": n, "pattern": code})
        return ArrowingResult("not_arrows", n, code, "dpll", ev, cert)
    if res.status == "unsat":
        return ArrowingResult("arrows", n, code, "dpll", {**ev, "proof": "unsatisfiable"})
    return ArrowingResult("unknown", n, code, "dpll", {**ev, "reason": "budget exhausted"})


def export_dimacs(n: int, p: TargetPattern, path: str | Path, symmetry: bool = False) -> CnfFormula:
    """Write the arrowing formula for Tr(n) in DIMACS form.

    Without ``symmetry`` the file holds exactly two clauses per copy.
    """
    f = build_cnf(build_explicit(n), p, symmetry=symmetry)
    f.write(path)
    return f


@dataclass
class ThresholdReport:
    pattern: str
    n_max: int
    steps: list[ArrowingResult]

    @property
    def threshold(self) -> int | None:
        for r in self.steps:
            if r.status == "arrows":
                return r.n
        return None

    @property
    def status(self) -> str:
        if self.threshold is not None:
            return "arrows"
        if any(r.status == "unknown" for r in self.steps):
            return "unknown"
        return "not_arrows"

    def monotone(self) -> bool:
        """Statuses read not_arrows... then at most one final arrows/unknown."""
        seen_stop = False
        for r in self.steps:
            if seen_stop:
                return False
            if r.status != "not_arrows":
                seen_stop = True
        return True

    def to_json(self) -> dict:
        return {"pattern": self.pattern, "n_max": self.n_max, "status": self.status,
                "threshold": self.threshold,
                "steps": [{"n": r.n, "status": r.status, "evidence": r.evidence} for r in self.steps]}


def threshold_search(p: TargetPattern, n_max: int = 16, budget: float | None = 60.0,
                     start: int = 0) -> ThresholdReport:
    """Ascending scan; stops at the first Arrows (monotone in n) or Unknown."""
    code = pattern_code(p)
    steps = []
    for n in range(start, n_max + 1):
        r = arrows_sat(n, p, budget)
        steps.append(r)
        if r.status != "not_arrows":
            break
    return ThresholdReport(code, n_max, steps)
