"""Shared machinery for proof replays: budgets, metered oracles, traces,
outcomes, face ladders, neighbor harvests and budgeted C4 searches."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterator

from ..colorings import ColoringOracle, color_graph
from ..core import (
    DepthError,
    RegionRef,
    adjacent,
    center,
    child_containing,
    face_contains_vertex,
    face_corners,
    neighbors_inside,
    normalize_edge,
    region_graph,
    triangle_face,
    vertex_count,
)
from ..detectors import find_mono_c4
from ..patterns import Witness, verify_witness


@dataclass(frozen=True)
class Budget:
    max_region_depth: int = 17
    max_queries: int = 5_000_000
    wall_clock: float = 60.0
    verify_depth: int = 8  # levels scanned when a hypothesis ranges over a neighbor set
    max_region_vertices: int = 30_000

    def __post_init__(self) -> None:
        for name in ("max_region_depth", "max_queries", "wall_clock", "verify_depth", "max_region_vertices"):
            if getattr(self, name) <= 0:
                raise ValueError(f"budget field {name} must be positive")

    def region_cap(self) -> int:
        """Deepest region copy that fits the vertex cap and depth cap."""
        m = 0
        while m < self.max_region_depth and vertex_count(m + 1) <= self.max_region_vertices:
            m += 1
        return m

    def to_json(self) -> dict:
        return {
            "max_region_depth": self.max_region_depth,
            "max_queries": self.max_queries,
            "wall_clock": self.wall_clock,
            "verify_depth": self.verify_depth,
            "max_region_vertices": self.max_region_vertices,
        }


class BudgetExhausted(RuntimeError):
    def __init__(self, what: str):
        super().__init__(what)
        self.what = what


class Meter(ColoringOracle):
    """Oracle wrapper that memoizes, counts distinct queries and enforces the budget."""

    name = "metered"

    def __init__(self, base: ColoringOracle, budget: Budget):
        super().__init__(base.max_depth)
        self.base = base
        self.budget = budget
        self.memo: dict[tuple[str, str], int] = {}
        self.started = time.monotonic()

    @property
    def queries(self) -> int:
        return len(self.memo)

    def check_clock(self) -> None:
        if time.monotonic() - self.started > self.budget.wall_clock:
            raise BudgetExhausted("wall clock")

    def _color(self, u: str, v: str) -> int:
        key = (u, v)
        c = self.memo.get(key)
        if c is None:
            if len(self.memo) >= self.budget.max_queries:
                raise BudgetExhausted("oracle queries")
            if (len(self.memo) & 1023) == 0:
                self.check_clock()
            c = self.base.color(u, v)
            self.memo[key] = c
        return c


# ---------------------------------------------------------------------------
# Traces
# ---------------------------------------------------------------------------

class TraceError(AssertionError):
    pass


@dataclass
class ReplayTrace:
    """Named objects of a replay plus the relations each one was checked against."""

    proof: str
    chains: dict[str, list[str]] = field(default_factory=dict)
    faces: dict[str, str] = field(default_factory=dict)
    sets: dict[str, list[str]] = field(default_factory=dict)
    choices: dict[str, object] = field(default_factory=dict)
    relations: list[tuple] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def adjacent(self, u: str, v: str) -> None:
        if not adjacent(u, v):
            raise TraceError(f"{u} and {v} are not adjacent")
        self.relations.append(("adjacent", u, v))

    def inside(self, v: str, face: str) -> None:
        if not face_contains_vertex(face, v) or v in face_corners(face):
            raise TraceError(f"{v} is not strictly inside face {face!r}")
        self.relations.append(("inside", v, face))

    def bounds(self, face: str, corners) -> None:
        if set(face_corners(face)) != set(corners):
            raise TraceError(f"face {face!r} is not bounded by {list(corners)}")
        self.relations.append(("bounds", face, tuple(corners)))

    def chain(self, name: str, vertices: list[str]) -> None:
        self.chains[name] = list(vertices)

    def to_json(self) -> dict:
        return {
            "proof": self.proof,
            "chains": self.chains,
            "faces": self.faces,
            "sets": self.sets,
            "choices": self.choices,
            "relations": len(self.relations),
            "notes": self.notes,
        }


def check_trace(trace: ReplayTrace) -> bool:
    """Re-check every recorded relation."""
    for rel in trace.relations:
        kind = rel[0]
        if kind == "adjacent" and not adjacent(rel[1], rel[2]):
            return False
        if kind == "inside" and (not face_contains_vertex(rel[2], rel[1]) or rel[1] in face_corners(rel[2])):
            return False
        if kind == "bounds" and set(face_corners(rel[1])) != set(rel[2]):
            return False
    return True


# ---------------------------------------------------------------------------
# Outcomes
# ---------------------------------------------------------------------------

@dataclass
class ExtractOutcome:
    kind = "outcome"
    trace: ReplayTrace
    queries: int = 0

    def to_json(self) -> dict:
        return {"outcome": self.kind, "queries": self.queries, "trace": self.trace.to_json()}


@dataclass
class WitnessOutcome(ExtractOutcome):
    kind = "witness"
    witness: Witness | None = None

    def to_json(self) -> dict:
        return {**super().to_json(), "witness": self.witness.to_json()}


@dataclass
class MonoC4ThroughApex(ExtractOutcome):
    kind = "mono_c4_through_apex"
    witness: Witness | None = None
    apex: str = ""

    def to_json(self) -> dict:
        return {**super().to_json(), "witness": self.witness.to_json(), "apex": self.apex}


@dataclass
class HypothesisViolation(ExtractOutcome):
    kind = "hypothesis_violation"
    edge: tuple[str, str] = ("", "")
    expected: int = 0
    actual: int = 0

    def to_json(self) -> dict:
        return {**super().to_json(), "edge": list(self.edge), "expected": self.expected, "actual": self.actual}


@dataclass
class FailureReport(ExtractOutcome):
    kind = "failure_report"
    reason: str = ""
    quantifier: str = ""

    def to_json(self) -> dict:
        return {**super().to_json(), "reason": self.reason, "quantifier": self.quantifier}


class ApexCycle(Exception):
    """A monochromatic C4 through the apex turned up; carries its witness."""

    def __init__(self, witness: Witness, apex: str):
        super().__init__(apex)
        self.witness = witness
        self.apex = apex


class Violation(Exception):
    """An apex edge does not have the color the star hypothesis assumes."""

    def __init__(self, edge: tuple[str, str], expected: int, actual: int):
        super().__init__(edge)
        self.edge = edge
        self.expected = expected
        self.actual = actual


class Unresolved(Exception):
    """A bounded search could not settle a step; names the quantifier."""

    def __init__(self, reason: str, quantifier: str):
        super().__init__(reason)
        self.reason = reason
        self.quantifier = quantifier


class Replay:
    """State shared by one extraction: metered oracle, verification host, trace."""

    def __init__(self, oracle: ColoringOracle, depth: int, budget: Budget, proof: str):
        self.oracle = oracle
        self.depth = depth
        self.budget = budget
        self.meter = Meter(oracle, budget)
        self.trace = ReplayTrace(proof)

    def sigma(self, u: str, v: str) -> int:
        return self.meter.color(u, v)

    def verified(self, w: Witness) -> Witness:
        ok, diag = verify_witness((self.oracle, self.depth), w)
        if not ok:
            raise AssertionError(f"replay produced an invalid {w.pattern}: {diag}")
        return w

    def finish(self, fn) -> ExtractOutcome:
        """Run ``fn`` and map the control-flow exceptions onto outcomes."""
        try:
            w = fn()
            return WitnessOutcome(self.trace, self.meter.queries, self.verified(w))
        except ApexCycle as a:
            return MonoC4ThroughApex(self.trace, self.meter.queries, self.verified(a.witness), a.apex)
        except Violation as v:
            return HypothesisViolation(self.trace, self.meter.queries, v.edge, v.expected, v.actual)
        except BudgetExhausted as b:
            return FailureReport(self.trace, self.meter.queries, f"budget exhausted: {b.what}", b.what)
        except Unresolved as u:
            return FailureReport(self.trace, self.meter.queries, u.reason, u.quantifier)
        except DepthError as d:
            return FailureReport(self.trace, self.meter.queries, f"depth: {d}", "depth")

    # -- navigation -------------------------------------------------------

    def ladder(self, name: str, face: str, a: str, b: str, count: int) -> tuple[list[str], list[str]]:
        """Nested centers: t_0 is the third corner of ``face``, t_l the center of
        the face bounded by a, b and t_{l-1}.  Returns (t_0..t_count, faces)."""
        if len(face) + count > self.depth:
            raise DepthError(f"ladder {name} needs depth {len(face) + count}, host has {self.depth}")
        corners = face_corners(face)
        t0 = next(c for c in corners if c not in (a, b))
        ts, faces = [t0], [face]
        f = face
        for _ in range(count):
            x = center(f)
            self.trace.adjacent(x, a)
            self.trace.adjacent(x, b)
            self.trace.adjacent(x, ts[-1])
            ts.append(x)
            f = child_containing(f, a, b)
            faces.append(f)
        self.trace.chain(name, ts)
        return ts, faces

    def apex_neighbors(self, apex: str, face: str, levels: int) -> Iterator[str]:
        """Neighbors of corner ``apex`` strictly inside ``face``, at most
        ``levels`` rounds below it, shallowest first."""
        limit = min(self.depth, len(face) + levels)
        yield from neighbors_inside(apex, face, limit)

    def harvest(self, apex: str, face: str, color: int, need: int) -> tuple[list[str], int]:
        """Neighbors of ``apex`` inside ``face`` joined by ``color``; stops at ``need``.

        Returns the hits and the number of neighbors examined.  The scan is
        limited to ``verify_depth`` levels, so fewer hits than ``need`` is a
        bounded observation, not a proof of absence.
        """
        hits: list[str] = []
        seen = 0
        for y in self.apex_neighbors(apex, face, self.budget.verify_depth):
            seen += 1
            if self.sigma(apex, y) == color:
                hits.append(y)
                if len(hits) >= need:
                    break
        return hits, seen

    def c4_in_region(self, region: RegionRef, anchors=None, avoid=None, color: int | None = None,
                     start: int = 2) -> tuple[Witness | None, int]:
        """Iterative deepening C4 search inside a region copy.

        Returns the first witness and the depth it appeared at, or
        (None, last depth tried) when the caps are reached.
        """
        cap = min(region.remaining_depth, self.budget.region_cap())
        m = min(start, cap)
        tried = m
        while m <= cap:
            self.meter.check_clock()
            g = region_graph(region, m, limit=cap)
            cg = color_graph(g, self.meter)
            w = find_mono_c4(cg, must_intersect=anchors, must_avoid=avoid, color=color)
            tried = m
            if w is not None:
                return w, m
            m += 1
        return None, tried

    def region(self, corners: tuple[str, str, str], apex: str | None = None,
               total: int | None = None) -> RegionRef:
        """Region of the face bounded by ``corners`` (apex first), cut at
        ``total`` levels of the host (default: the whole host)."""
        face = triangle_face(*corners)
        self.trace.bounds(face, corners)
        boundary = corners if apex is None else (apex, *[c for c in corners if c != apex])
        return RegionRef.of_face(face, boundary, total if total is not None else self.depth)

    def expect(self, hub: str, y: str, color: int) -> None:
        """Lazy check of a star hypothesis on one touched edge."""
        actual = self.sigma(hub, y)
        if actual != color:
            raise Violation(normalize_edge(hub, y), color, actual)

    def star_scan(self, hub: str, face: str, color: int) -> str | None:
        """First edge from ``hub`` into the closed face with the wrong color,
        scanning ``verify_depth`` levels; None when the scan is clean."""
        for c in face_corners(face):
            if c != hub and self.sigma(hub, c) != color:
                return c
        for y in self.apex_neighbors(hub, face, self.budget.verify_depth):
            if self.sigma(hub, y) != color:
                return y
        return None

    def star_disc(self, name: str, face: str, hub: str, other: str, color: int, k: int) -> str:
        """Nested-pair scan: chain t_r inside (hub, other, t_{r-1}) and discs
        (hub, t_{2r-1}, t_{2r}) for r in 1..k; returns the first disc whose
        hub edges all have ``color`` within the scan depth."""
        ts, tfaces = self.ladder(f"{name}.t", face, hub, other, 2 * k)
        for r in range(1, k + 1):
            disc = child_containing(tfaces[2 * r - 1], hub, ts[2 * r - 1])
            self.trace.bounds(disc, (hub, ts[2 * r - 1], ts[2 * r]))
            bad = self.star_scan(hub, disc, color)
            self.trace.choices[f"{name}.disc[{r}]"] = bad
            if bad is None:
                self.trace.faces[f"{name}.disc"] = disc
                return disc
        raise Unresolved(f"every disc around {hub} has an edge of color {1 - color}", f"{name}.star_disc")


def edge(u: str, v: str) -> tuple[str, str]:
    return normalize_edge(u, v)


def extract_c4_region(oracle: ColoringOracle, region: RegionRef, anchors=None, avoid=None,
                      budget: Budget | None = None, color: int | None = None) -> Witness | None:
    """Monochromatic C4 inside ``region`` meeting ``anchors`` and avoiding
    ``avoid``, by iterative deepening; None when the budget runs out first.

    Raises BudgetExhausted when the query or clock budget is spent.
    """
    rp = Replay(oracle, region.level + region.remaining_depth, budget or Budget(), "c4")
    w, _ = rp.c4_in_region(region, anchors, avoid, color)
    return None if w is None else rp.verified(w)
