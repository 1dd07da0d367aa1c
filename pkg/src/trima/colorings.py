"""2-edge-colorings of Tr(N) evaluated lazily, one edge at a time.

The two recursive schemes are driven by a per-face *birth table*: the
colors of the three edges joining ``Center(p)`` to the corners of ``p``,
listed in corner order.  A child's table follows from its parent's table
alone, so any edge is colored in O(depth) with prefix memoization.
"""

from __future__ import annotations

import hashlib
from collections import OrderedDict
from typing import Callable, Mapping

from .core import (
    DepthError,
    ExplicitGraph,
    birth_face,
    birth_round,
    build_explicit,
    edge_key,
    face_corners,
    is_outer,
    normalize_edge,
)

# Canonical base triangle: face "0" of Tr(1), corners (Center(ε), O0, O1).
_BASE_ZERO_EDGES = frozenset({
    frozenset({"C:", "O0"}),
    frozenset({"C:", "O1"}),
    frozenset({"O0", "O1"}),
})
_ROOT_BIRTH = (0, 0, 1)  # Center(ε) to (O0, O1, O2)


class InvariantViolation(ValueError):
    """A scheme's birth colors are not split two to one."""


def odd_index(colors: tuple[int, int, int]) -> int:
    """Index of the color that differs from the other two."""
    a, b, c = colors
    if a == b == c:
        raise InvariantViolation(f"birth colors {colors} are monochromatic")
    if b == c:
        return 0
    if a == c:
        return 1
    return 2


def _scheme_a_child(a: int, b: int, j: int) -> tuple[int, int, int]:
    # x_j has corners (x, v_j, v_{j+1}); a = σ(xv0), b = σ(xv1) = σ(xv2)
    return ((a, a, b), (a, b, b), (a, b, a))[j]


def _scheme_b_child(a: int, b: int, j: int) -> tuple[int, int, int]:
    return ((b, a, b), (b, a, b), (a, b, a))[j]


class ColoringOracle:
    """Total deterministic map from edges of Tr(max_depth) to {0, 1}."""

    name = "oracle"

    def __init__(self, max_depth: int | None = None):
        self.max_depth = max_depth

    def _check(self, u: str, v: str) -> None:
        if self.max_depth is not None and max(birth_round(u), birth_round(v)) > self.max_depth:
            raise DepthError(f"edge {u}{v} lies below depth {self.max_depth}")

    def color(self, u: str, v: str) -> int:
        self._check(u, v)
        return self._color(*normalize_edge(u, v))

    __call__ = color

    def _color(self, u: str, v: str) -> int:
        raise NotImplementedError

    def descriptor(self) -> dict:
        return {"kind": self.name, "max_depth": self.max_depth}


class _RecursiveScheme(ColoringOracle):
    _child: Callable[[int, int, int], tuple[int, int, int]]

    def __init__(self, max_depth: int | None = None, cache_size: int = 1 << 18):
        super().__init__(max_depth)
        self._cache: OrderedDict[str, tuple[int, int, int]] = OrderedDict()
        self._cache_size = cache_size

    def birth_colors(self, p: str) -> tuple[int, int, int]:
        """Colors from ``Center(p)`` to the corners of ``p`` (corner order)."""
        cache = self._cache
        hit = cache.get(p)
        if hit is not None:
            return hit
        # walk up to the deepest cached prefix, then replay downwards
        k = len(p)
        while k > 0 and p[:k] not in cache:
            k -= 1
        colors = cache.get(p[:k], _ROOT_BIRTH) if k else _ROOT_BIRTH
        for i in range(k, len(p)):
            s = odd_index(colors)
            a, b = colors[s], colors[(s + 1) % 3]
            colors = self._child(a, b, (ord(p[i]) - 48 - s) % 3)
            cache[p[: i + 1]] = colors
        cache[""] = _ROOT_BIRTH
        while len(cache) > self._cache_size:
            cache.popitem(last=False)
        return colors

    def _color(self, u: str, v: str) -> int:
        if is_outer(v):
            return 0 if {u, v} == {"O0", "O1"} else 1
        q = birth_face(v)
        corners = face_corners(q)
        try:
            pos = corners.index(u)
        except ValueError:
            raise ValueError(f"{u}{v} is not an edge of Tr(n)") from None
        if not q:
            return 0 if frozenset({u, v}) in _BASE_ZERO_EDGES else 1
        return self.birth_colors(q)[pos]

    def odd_corner(self, x: str) -> str:
        p = birth_face(x)
        return face_corners(p)[odd_index(self.birth_colors(p))]


class SchemeA(_RecursiveScheme):
    """Scheme whose color classes have no cycle longer than four and no H+."""

    name = "scheme-a"
    _child = staticmethod(_scheme_a_child)


class SchemeB(_RecursiveScheme):
    """Scheme without a monochromatic K_{2,3}."""

    name = "scheme-b"
    _child = staticmethod(_scheme_b_child)


class SeededRandom(ColoringOracle):
    """Parity of a 64-bit keyed BLAKE2b hash of the normalized edge."""

    name = "random"

    def __init__(self, seed: int, max_depth: int | None = None):
        super().__init__(max_depth)
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self._key = self.seed.to_bytes(8, "little")

    def _color(self, u: str, v: str) -> int:
        h = hashlib.blake2b(f"{u}-{v}".encode(), digest_size=8, key=self._key).digest()
        return h[-1] & 1

    def descriptor(self) -> dict:
        return {**super().descriptor(), "seed": self.seed}


class Constant(ColoringOracle):
    name = "constant"

    def __init__(self, value: int, max_depth: int | None = None):
        super().__init__(max_depth)
        if value not in (0, 1):
            raise ValueError("colors are 0 or 1")
        self.value = value

    def _color(self, u: str, v: str) -> int:
        return self.value

    def descriptor(self) -> dict:
        return {**super().descriptor(), "value": self.value}


class ExplicitTable(ColoringOracle):
    """Colors read from a table; edges missing from it go to ``default``.

    With ``default=None`` the table must cover every queried edge.
    """

    name = "table"

    def __init__(self, table: Mapping[tuple[str, str], int], default: ColoringOracle | None = None,
                 max_depth: int | None = None):
        super().__init__(max_depth if max_depth is not None else getattr(default, "max_depth", None))
        self.table = {normalize_edge(*e): int(c) for e, c in table.items()}
        self.default = default

    def _color(self, u: str, v: str) -> int:
        c = self.table.get((u, v))
        if c is not None:
            return c
        if self.default is None:
            raise KeyError(f"edge {u}-{v} has no color in the table")
        return self.default.color(u, v)

    def descriptor(self) -> dict:
        d = {**super().descriptor(), "entries": len(self.table)}
        if self.default is not None:
            d["default"] = self.default.descriptor()
        return d


class StarForced(ColoringOracle):
    """Every edge at one of the ``stars`` vertices gets that vertex's color.

    ``where`` optionally restricts forcing to edges whose other endpoint
    satisfies a predicate.  Used to build adversarial oracles.
    """

    name = "star-forced"

    def __init__(self, base: ColoringOracle, stars: Mapping[str, int],
                 where: Callable[[str, str], bool] | None = None):
        super().__init__(base.max_depth)
        self.base = base
        self.stars = dict(stars)
        self.where = where

    def _color(self, u: str, v: str) -> int:
        for hub, other in ((u, v), (v, u)):
            c = self.stars.get(hub)
            if c is not None and (self.where is None or self.where(hub, other)):
                return c
        return self.base.color(u, v)

    def descriptor(self) -> dict:
        return {**super().descriptor(), "stars": dict(sorted(self.stars.items())),
                "base": self.base.descriptor()}


def odd_corner(x: str, oracle: ColoringOracle) -> str:
    """Corner of ``x``'s birth face joined to ``x`` by the minority color."""
    p = birth_face(x)
    corners = face_corners(p)
    colors = tuple(oracle.color(x, c) for c in corners)
    return corners[odd_index(colors)]


def parse_coloring(spec: str, max_depth: int | None = None) -> ColoringOracle:
    """``a``, ``b``, ``random:SEED``, ``const:0`` or ``const:1``."""
    s = spec.strip().lower()
    if s in ("a", "scheme-a"):
        return SchemeA(max_depth)
    if s in ("b", "scheme-b"):
        return SchemeB(max_depth)
    if s.startswith("random:"):
        return SeededRandom(int(s.split(":", 1)[1]), max_depth)
    if s.startswith("const:"):
        return Constant(int(s.split(":", 1)[1]), max_depth)
    raise ValueError(f"unknown coloring {spec!r}")


# ---------------------------------------------------------------------------
# Colored explicit graphs
# ---------------------------------------------------------------------------

class ColoredGraph:
    """Explicit graph plus a frozen color per edge id."""

    def __init__(self, graph: ExplicitGraph, colors, descriptor: dict | None = None):
        colors = bytes(int(c) for c in colors)
        if len(colors) != graph.n_edges:
            raise ValueError("color array length differs from the edge count")
        if any(c > 1 for c in colors):
            raise ValueError("colors are 0 or 1")
        self.graph = graph
        self.colors = colors
        self.descriptor = descriptor or {"kind": "explicit"}
        adj_c: list[list[list[int]]] = [[[] for _ in graph.vertices] for _ in range(2)]
        for e, (i, j) in enumerate(graph.edges):
            c = colors[e]
            adj_c[c][i].append(j)
            adj_c[c][j].append(i)
        # neighbor lists per color, sorted ascending
        self.adj_c = tuple(tuple(tuple(sorted(a)) for a in side) for side in adj_c)
        self.nbr_c = tuple(tuple(frozenset(a) for a in side) for side in self.adj_c)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.graph.vertices

    def color(self, i: int, j: int) -> int:
        return self.colors[self.graph.edge_id(i, j)]

    def color_of(self, u: str, v: str) -> int:
        g = self.graph
        return self.colors[g.edge_id(g.index[u], g.index[v])]

    def has_vertex(self, v: str) -> bool:
        return v in self.graph.index

    def adjacent(self, u: str, v: str) -> bool:
        g = self.graph
        return g.has_edge(g.index[u], g.index[v])

    def edge_color_map(self) -> dict[str, int]:
        g = self.graph
        return {edge_key(*g.edge_labels(e)): c for e, c in enumerate(self.colors)}

    def with_flipped(self, e: int) -> "ColoredGraph":
        cols = bytearray(self.colors)
        cols[e] ^= 1
        return ColoredGraph(self.graph, cols, {"kind": "mutant", "flipped": e, "base": self.descriptor})

    def as_oracle(self) -> ExplicitTable:
        g = self.graph
        return ExplicitTable({g.edge_labels(e): c for e, c in enumerate(self.colors)})


def color_graph(graph: ExplicitGraph, oracle: ColoringOracle) -> ColoredGraph:
    """Evaluate ``oracle`` on every edge of an explicit graph with global labels."""
    labels = graph.vertices
    cols = [oracle.color(labels[i], labels[j]) for i, j in graph.edges]
    return ColoredGraph(graph, cols, oracle.descriptor())


def materialize(n: int, oracle: ColoringOracle, limit: int = 14) -> ColoredGraph:
    """Tr(n) with every edge colored by ``oracle``."""
    if oracle.max_depth is not None and n > oracle.max_depth:
        raise DepthError(f"oracle only covers Tr({oracle.max_depth})")
    return color_graph(build_explicit(n, limit), oracle)


def coloring_from_table(graph: ExplicitGraph, table: Mapping[str, int]) -> ColoredGraph:
    """ColoredGraph from an ``{edge-key: color}`` mapping covering all edges."""
    cols = []
    for e in range(graph.n_edges):
        cols.append(int(table[edge_key(*graph.edge_labels(e))]))
    return ColoredGraph(graph, cols, {"kind": "table"})


__all__ = [
    "ColoredGraph",
    "ColoringOracle",
    "Constant",
    "ExplicitTable",
    "InvariantViolation",
    "SchemeA",
    "SchemeB",
    "SeededRandom",
    "StarForced",
    "color_graph",
    "coloring_from_table",
    "materialize",
    "odd_corner",
    "odd_index",
    "parse_coloring",
]
