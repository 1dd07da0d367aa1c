"""Exact searches for monochromatic target patterns in explicit colored graphs.

All searches iterate vertex ids in ascending order, so results are
deterministic for a fixed host.  Every returned witness is built from role
lists and can be re-checked with ``patterns.verify_witness``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import networkx as nx

from .colorings import ColoredGraph, InvariantViolation, odd_index
from .core import birth_face, birth_round, center, face_corners, is_outer
from .patterns import K23, CycleGE, Cycle, HPlus, Witness

Cycle4 = tuple[int, int, int, int]


class BudgetExceeded(RuntimeError):
    """An exact search ran past its node or block-size budget."""


def _colors(color: int | None) -> tuple[int, ...]:
    return (0, 1) if color is None else (color,)


def _ids(cg: ColoredGraph, labels: Iterable[str] | None) -> set[int]:
    if not labels:
        return set()
    idx = cg.graph.index
    return {idx[v] for v in labels if v in idx}


def _label(cg: ColoredGraph, vs: Iterable[int]) -> list[str]:
    return [cg.vertices[i] for i in vs]


# ---------------------------------------------------------------------------
# C4
# ---------------------------------------------------------------------------

def iter_mono_c4(cg: ColoredGraph, color: int | None = None,
                 avoid: set[int] | None = None) -> Iterator[tuple[int, Cycle4]]:
    """Yield ``(color, (u, a, w, b))`` for every monochromatic C4 once.

    ``u`` is the smallest cycle vertex, ``w`` its opposite and ``a < b``;
    cycles come out sorted by ``(u, w, a, b)`` within each color.
    """
    avoid = avoid or set()
    for c in _colors(color):
        adj = cg.adj_c[c]
        for u in range(len(adj)):
            if u in avoid:
                continue
            via: dict[int, list[int]] = defaultdict(list)
            for a in adj[u]:
                if a <= u or a in avoid:
                    continue
                for w in adj[a]:
                    if w > u and w not in avoid:
                        via[w].append(a)
            for w in sorted(via):
                mids = via[w]
                if len(mids) < 2:
                    continue
                for i, a in enumerate(mids):
                    for b in mids[i + 1:]:
                        yield c, (u, a, w, b)


def _c4_through(cg: ColoredGraph, s: int, c: int, avoid: set[int]) -> Iterator[Cycle4]:
    """Canonical forms of the C4s of color ``c`` that pass through ``s``."""
    adj, nbr = cg.adj_c[c], cg.nbr_c[c]
    ns = [a for a in adj[s] if a not in avoid]
    # s as a cycle corner: two neighbors a, b with another common neighbor w
    for i, a in enumerate(ns):
        for b in ns[i + 1:]:
            for w in adj[a]:
                if w != s and w not in avoid and w in nbr[b]:
                    yield _canon4(s, a, w, b)


def _canon4(x0: int, x1: int, x2: int, x3: int) -> Cycle4:
    cyc = [x0, x1, x2, x3]
    i = cyc.index(min(cyc))
    u, p, w, q = cyc[i], cyc[(i + 1) % 4], cyc[(i + 2) % 4], cyc[(i + 3) % 4]
    return (u, min(p, q), w, max(p, q))


def _c4_witness(cg: ColoredGraph, c: int, cyc: Cycle4) -> Witness:
    return Witness.build(Cycle(4), c, cycle=_label(cg, cyc))


def find_mono_c4(cg: ColoredGraph, must_intersect: Iterable[str] | None = None,
                 must_avoid: Iterable[str] | None = None, color: int | None = None,
                 must_use_edge: tuple[str, str] | None = None) -> Witness | None:
    """First monochromatic C4 in ``(u, w, a, b)`` order that meets the filters.

    ``must_intersect``: the cycle meets this vertex set.  ``must_avoid``: the
    cycle misses it.  ``must_use_edge``: the cycle contains this edge.
    """
    avoid = _ids(cg, must_avoid)
    hit = _ids(cg, must_intersect) - avoid
    if must_intersect is not None and not hit:
        return None
    edge = None
    if must_use_edge is not None:
        u, v = must_use_edge
        if u not in cg.graph.index or v not in cg.graph.index:
            return None
        edge = frozenset(_ids(cg, must_use_edge))
        if edge & avoid:
            return None
    for c in _colors(color):
        found: set[Cycle4] = set()
        if edge is not None or must_intersect is not None:
            anchors = sorted(edge) if edge is not None else sorted(hit)
            for s in anchors:
                found.update(_c4_through(cg, s, c, avoid))
            if must_intersect is not None:
                found = {cy for cy in found if hit.intersection(cy)}
            if edge is not None:
                found = {cy for cy in found if _uses_edge(cy, edge)}
            if found:
                best = min(found, key=lambda t: (t[0], t[2], t[1], t[3]))
                return _c4_witness(cg, c, best)
        else:
            for cc, cyc in iter_mono_c4(cg, c, avoid):
                return _c4_witness(cg, cc, cyc)
    return None


def _uses_edge(cyc: Cycle4, edge: frozenset) -> bool:
    return any(frozenset((cyc[i], cyc[(i + 1) % 4])) == edge for i in range(4))


# ---------------------------------------------------------------------------
# K_{2,3}
# ---------------------------------------------------------------------------

def find_mono_k23(cg: ColoredGraph, color: int | None = None) -> Witness | None:
    """A pair with three common neighbors reached by one color, if any."""
    for c in _colors(color):
        adj = cg.adj_c[c]
        for x1 in range(len(adj)):
            via: dict[int, list[int]] = defaultdict(list)
            for a in adj[x1]:
                for x2 in adj[a]:
                    if x2 > x1:
                        via[x2].append(a)
            for x2 in sorted(via):
                if len(via[x2]) >= 3:
                    triple = sorted(via[x2])[:3]
                    return Witness.build(K23, c, pair=_label(cg, (x1, x2)), triple=_label(cg, triple))
    return None


# ---------------------------------------------------------------------------
# H+
# ---------------------------------------------------------------------------

def find_mono_hplus(cg: ColoredGraph, color: int | None = None) -> Witness | None:
    """A monochromatic C4 with distinct outside pendants at two adjacent cycle vertices."""
    for c, (u, a, w, b) in iter_mono_c4(cg, color):
        adj = cg.adj_c[c]
        ring = (u, a, w, b)
        members = set(ring)
        for i in range(4):
            for step in (1, -1):
                x, y = ring[i], ring[(i + step) % 4]
                xs = [p for p in adj[x] if p not in members]
                ys = [q for q in adj[y] if q not in members]
                if not xs or not ys:
                    continue
                p = xs[0]
                q = next((t for t in ys if t != p), None)
                if q is None:
                    q = ys[0]
                    p = next((t for t in xs if t != q), None)
                    if p is None:
                        continue
                order = [ring[(i + step * j) % 4] for j in range(4)]
                return Witness.build(HPlus, c, cycle=_label(cg, order), pendants=_label(cg, (p, q)))
    return None


# ---------------------------------------------------------------------------
# Long cycles
# ---------------------------------------------------------------------------

DEFAULT_BLOCK_LIMIT = 10_000
DEFAULT_NODE_BUDGET = 2_000_000


def _twin_reduce(block: set[int], adj: tuple[tuple[int, ...], ...]) -> set[int]:
    """Drop surplus false twins; cycle lengths in the block are unchanged.

    Pairwise non-adjacent vertices with the same neighborhood N are
    interchangeable, and a cycle visits at most |N| of them.
    """
    groups: dict[frozenset, list[int]] = defaultdict(list)
    for v in sorted(block):
        groups[frozenset(x for x in adj[v] if x in block)].append(v)
    keep = set(block)
    for nb, vs in groups.items():
        if len(vs) > len(nb):
            keep.difference_update(vs[len(nb):])
    return keep


class _Counter:
    def __init__(self, budget: int):
        self.left = budget

    def tick(self, n: int = 1) -> None:
        self.left -= n
        if self.left < 0:
            raise BudgetExceeded("cycle search node budget exhausted")


def _reach_size(start: int, allowed: set[int], blocked: set[int],
                adj: tuple[tuple[int, ...], ...], need: int, ctr: _Counter) -> int:
    """Vertices reachable from ``start`` inside ``allowed - blocked`` (capped at ``need``)."""
    seen = {start}
    stack = [start]
    while stack and len(seen) < need:
        x = stack.pop()
        ctr.tick()
        for y in adj[x]:
            if y in allowed and y not in blocked and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen)


def _long_cycle_in_block(block: set[int], adj: tuple[tuple[int, ...], ...], k: int,
                         ctr: _Counter) -> list[int] | None:
    """A cycle of length >= k inside ``block``, using its minimum vertex as anchor."""
    for s in sorted(block):
        allowed = {v for v in block if v > s}
        if len(allowed) + 1 < k:
            break
        path = [s]
        on_path = {s}
        stack = [iter([y for y in adj[s] if y in allowed])]
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                stack.pop()
                on_path.discard(path.pop())
                continue
            if nxt in on_path:
                continue
            ctr.tick()
            path.append(nxt)
            on_path.add(nxt)
            if len(path) >= k and s in adj[nxt] and len(path) >= 3:
                return path[:]
            remaining = k - len(path)
            if remaining > 0:
                room = _reach_size(nxt, allowed, on_path - {nxt}, adj, remaining + 1, ctr) - 1
                if room < remaining:
                    on_path.discard(path.pop())
                    continue
            stack.append(iter([y for y in adj[nxt] if y in allowed and y not in on_path]))
    return None


def _blocks(adj: tuple[tuple[int, ...], ...]) -> list[set[int]]:
    g = nx.Graph()
    for x, ys in enumerate(adj):
        for y in ys:
            if x < y:
                g.add_edge(x, y)
    blocks = [set(b) for b in nx.biconnected_components(g)]
    blocks.sort(key=min)
    return blocks


def find_mono_cycle_ge(cg: ColoredGraph, k: int, color: int | None = None,
                       budget: int = DEFAULT_NODE_BUDGET,
                       block_limit: int = DEFAULT_BLOCK_LIMIT) -> Witness | None:
    """A monochromatic cycle of length at least ``k``, or None if there is none.

    Raises BudgetExceeded when a block is too large or the search runs out of
    nodes; that outcome says nothing about existence.
    """
    if k < 3:
        raise ValueError("cycles have length at least 3")
    ctr = _Counter(budget)
    for c in _colors(color):
        adj = cg.adj_c[c]
        for block in _blocks(adj):
            if len(block) < k:
                continue
            block = _twin_reduce(block, adj)
            if len(block) < k:
                continue
            if len(block) > block_limit:
                raise BudgetExceeded(f"block of {len(block)} vertices exceeds {block_limit}")
            cyc = _long_cycle_in_block(block, adj, k, ctr)
            if cyc is not None:
                return Witness.build(CycleGE(k), c, cycle=_label(cg, cyc))
    return None


def find_mono_cycle(cg: ColoredGraph, k: int, color: int | None = None,
                    budget: int = DEFAULT_NODE_BUDGET) -> Witness | None:
    """A monochromatic cycle of length exactly ``k``.

    The path search runs inside each twin-reduced block, since a cycle never
    leaves its block and twin reduction keeps every cycle length.
    """
    if k < 3:
        raise ValueError("cycles have length at least 3")
    if k == 4:
        for c, cyc in iter_mono_c4(cg, color):
            return _c4_witness(cg, c, cyc)
        return None
    ctr = _Counter(budget)
    for c in _colors(color):
        adj, nbr = cg.adj_c[c], cg.nbr_c[c]
        for block in _blocks(adj):
            if len(block) < k:
                continue
            block = _twin_reduce(block, adj)
            cyc = _exact_cycle_in_block(block, adj, nbr, k, ctr)
            if cyc is not None:
                return Witness.build(Cycle(k), c, cycle=_label(cg, cyc))
    return None


def _exact_cycle_in_block(block: set[int], adj, nbr, k: int, ctr: _Counter) -> list[int] | None:
    for s in sorted(block):
        path = [s]
        on_path = {s}
        stack = [iter([y for y in adj[s] if y > s and y in block])]
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                stack.pop()
                on_path.discard(path.pop())
                continue
            if nxt in on_path:
                continue
            ctr.tick()
            if len(path) == k - 1:
                if s in nbr[nxt]:
                    return path + [nxt]
                continue
            path.append(nxt)
            on_path.add(nxt)
            stack.append(iter([y for y in adj[nxt] if y > s and y in block and y not in on_path]))
    return None


# ---------------------------------------------------------------------------
# Scheme invariants
# ---------------------------------------------------------------------------

@dataclass
class ClaimResult:
    claim: str
    statement: str
    passed: bool = True
    sites: int = 0
    counterexample: dict | None = None
    checked: bool = True

    def site(self, ok: bool, **where) -> None:
        self.sites += 1
        if not ok and self.passed:
            self.passed = False
            self.counterexample = where

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "statement": self.statement,
            "checked": self.checked,
            "passed": self.passed,
            "sites": self.sites,
            "counterexample": self.counterexample,
        }


@dataclass
class InvariantReport:
    scheme: str
    depth: int
    claims: list[ClaimResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def __getitem__(self, key: str) -> ClaimResult:
        for c in self.claims:
            if c.claim == key:
                return c
        raise KeyError(key)

    def to_json(self) -> dict:
        return {"scheme": self.scheme, "depth": self.depth, "passed": self.passed,
                "claims": [c.to_json() for c in self.claims]}


CLAIM5_MAX_DEPTH = 5


class _View:
    """Label-level access to a colored Tr(n)."""

    def __init__(self, cg: ColoredGraph):
        if cg.graph.depth is None:
            raise ValueError("scheme invariants need a colored Tr(n)")
        self.cg = cg
        self.n = cg.graph.depth
        self.idx = cg.graph.index
        self.labels = cg.vertices

    def col(self, u: str, v: str) -> int:
        return self.cg.color_of(u, v)

    def nbrs(self, v: str) -> list[str]:
        return [self.labels[j] for j in self.cg.graph.adjacency[self.idx[v]]]

    def adj(self, u: str, v: str) -> bool:
        return self.cg.adjacent(u, v)

    def centers(self) -> list[str]:
        return [v for v in self.labels if not is_outer(v)]

    def birth_colors(self, x: str) -> tuple[int, int, int]:
        return tuple(self.col(x, c) for c in face_corners(birth_face(x)))


def _claim_two_colors(v: _View) -> ClaimResult:
    r = ClaimResult("1", "a new vertex sees exactly two colors toward its birth face")
    for x in v.centers():
        r.site(len(set(v.birth_colors(x))) == 2, vertex=x)
    return r


def _inside(w: str, p: str) -> bool:
    """``w`` lies strictly inside face ``p``."""
    return not is_outer(w) and birth_face(w).startswith(p)


def _a_corner_stars(v: _View) -> ClaimResult:
    r = ClaimResult("2", "edges from a face corner into the face share the color of the corner-center edge")
    for w in v.centers():
        bw = birth_face(w)
        for v0 in v.nbrs(w):
            if birth_round(v0) >= birth_round(w):
                continue
            for i in range(len(bw)):
                p = bw[:i]
                if v0 in face_corners(p):
                    ok = v.col(v0, w) == v.col(v0, center(p))
                    r.site(ok, face=p, corner=v0, vertex=w)
    return r


def _a_center_odd(v: _View) -> ClaimResult:
    r = ClaimResult("3", "edges from a center into its face take the minority birth color")
    for x in v.centers():
        p = birth_face(x)
        if len(p) > v.n - 2:
            continue
        cols = v.birth_colors(x)
        try:
            s = odd_index(cols)
        except InvariantViolation:
            r.site(False, vertex=x, reason="monochromatic birth colors")
            continue
        target = cols[s]
        for w in v.nbrs(x):
            if _inside(w, p) and w != x:
                r.site(v.col(x, w) == target, face=p, vertex=x, neighbor=w)
    return r


def _a_common_split(v: _View) -> ClaimResult:
    r = ClaimResult("4", "common neighbors of a center and a majority corner see two colors")
    for x in v.centers():
        p = birth_face(x)
        if len(p) > v.n - 2:
            continue
        corners = face_corners(p)
        cols = v.birth_colors(x)
        nx_ = set(v.nbrs(x))
        for j, v0 in enumerate(corners):
            if cols[j] not in (cols[(j + 1) % 3], cols[(j + 2) % 3]):
                continue
            others = {corners[(j + 1) % 3], corners[(j + 2) % 3]}
            for w in v.nbrs(v0):
                if w in nx_ and w not in others:
                    r.site(v.col(w, v0) != v.col(w, x), face=p, center=x, corner=v0, vertex=w)
    return r


def _a_short_paths(v: _View) -> ClaimResult:
    r = ClaimResult("5", "a pair joined through a younger vertex has no longer path of that color")
    if v.n > CLAIM5_MAX_DEPTH:
        r.checked = False
        return r
    cg = v.cg
    for e, (i, j) in enumerate(cg.graph.edges):
        u, w = v.labels[i], v.labels[j]
        floor = max(1, birth_round(u), birth_round(w))
        for c in (0, 1):
            nb = cg.nbr_c[c]
            shared = nb[i] & nb[j]
            if not any(birth_round(v.labels[p]) > floor for p in shared):
                continue
            r.site(not _long_path(cg, c, i, j), edge=[u, w], color=c)
    return r


def _long_path(cg: ColoredGraph, c: int, u: int, v: int) -> bool:
    """Is there a simple u-v path of length >= 3 in color class c?

    Such a path is u, a, ..., b, v with a != b joined outside {u, v}.
    """
    adj, nbr = cg.adj_c[c], cg.nbr_c[c]
    comp: dict[int, int] = {}
    for s in range(len(adj)):
        if s in (u, v) or s in comp:
            continue
        comp[s] = s
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp and y not in (u, v):
                    comp[y] = s
                    stack.append(y)
    sides: dict[int, tuple[set, set]] = defaultdict(lambda: (set(), set()))
    for a in nbr[u]:
        if a != v:
            sides[comp[a]][0].add(a)
    for b in nbr[v]:
        if b != u:
            sides[comp[b]][1].add(b)
    for left, right in sides.values():
        if left and right and not (len(left) == len(right) == 1 and left == right):
            return True
    return False


def _b_inner_split(v: _View) -> ClaimResult:
    r = ClaimResult("2", "a deep vertex meets two corners of an ancestor face in different colors")
    for x in v.centers():
        bx = birth_face(x)
        for i in range(1, min(len(bx), v.n - 1)):
            p = bx[:i]
            touching = [c for c in face_corners(p) if v.adj(x, c)]
            if len(touching) == 2:
                r.site(v.col(x, touching[0]) != v.col(x, touching[1]), face=p, vertex=x, corners=touching)
    return r


def _b_common_bound(v: _View) -> ClaimResult:
    r = ClaimResult("3", "an edge has at most two common neighbors of each joint color")
    cg = v.cg
    for i, j in cg.graph.edges:
        for c in (0, 1):
            k = len(cg.nbr_c[c][i] & cg.nbr_c[c][j])
            r.site(k <= 2, edge=[v.labels[i], v.labels[j]], color=c, count=k)
    return r


def _b_chords(v: _View) -> ClaimResult:
    r = ClaimResult("4", "every 4-cycle has a chord")
    g = v.cg.graph
    common: dict[tuple[int, int], list[int]] = defaultdict(list)
    for m, ns in enumerate(g.adjacency):
        for a_i, a in enumerate(ns):
            for b in ns[a_i + 1:]:
                if not g.has_edge(a, b):
                    common[(a, b)].append(m)
    for (a, b), ms in sorted(common.items()):
        for s_i, s in enumerate(ms):
            for t in ms[s_i + 1:]:
                r.site(g.has_edge(s, t), cycle=_label(v.cg, (a, s, b, t)))
    return r


def check_scheme_invariants(cg: ColoredGraph, scheme: str) -> InvariantReport:
    """Evaluate the structural claims behind scheme ``a`` or ``b`` on ``cg``.

    The claims are checked at every applicable site of the colored Tr(n);
    scheme A's path claim is only evaluated for n <= 5.
    """
    s = scheme.strip().upper()
    v = _View(cg)
    if s == "A":
        claims = [_claim_two_colors(v), _a_corner_stars(v), _a_center_odd(v),
                  _a_common_split(v), _a_short_paths(v)]
    elif s == "B":
        claims = [_claim_two_colors(v), _b_inner_split(v), _b_common_bound(v), _b_chords(v)]
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    return InvariantReport(s, v.n, claims)
