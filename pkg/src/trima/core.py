"""Iterated triangulations Tr(n): face-tree addressing and explicit graphs.

Every inner face of Tr(n) is addressed by a trit string (its face path).
The empty path is the single inner face of Tr(0); child ``j`` of a face with
clockwise corners ``(c0, c1, c2)`` and center ``x`` has corners
``(x, c_j, c_{j+1 mod 3})``.  The center born inside face ``p`` is the
vertex ``"C:" + p``; the three outer vertices are ``"O0"``, ``"O1"``, ``"O2"``.

Vertex ids are plain strings in their serialized form, so they hash fast,
compare cheaply and go straight into JSON.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

OUTER = ("O0", "O1", "O2")
DEFAULT_EXPLICIT_LIMIT = 14


class DepthError(ValueError):
    """A face path or vertex lies deeper than the configured maximum."""


class BudgetError(RuntimeError):
    """An explicit materialization would exceed the memory budget."""


# ---------------------------------------------------------------------------
# Vertex ids
# ---------------------------------------------------------------------------

def outer(i: int) -> str:
    return OUTER[i]


def center(path: str) -> str:
    return "C:" + path


def is_outer(v: str) -> bool:
    return v[0] == "O"


def birth_face(v: str) -> str:
    """Face path in which the center ``v`` was inserted."""
    if v[:2] != "C:":
        raise ValueError(f"{v!r} is not a center vertex")
    return v[2:]


def birth_round(v: str) -> int:
    """Round in which ``v`` appears: 0 for outer vertices, ``|p|+1`` for Center(p)."""
    return 0 if v[0] == "O" else len(v) - 1


def vertex_key(v: str) -> tuple:
    """Total order: O0 < O1 < O2 < centers by (depth, digits)."""
    if v[0] == "O":
        return (0, int(v[1]), "")
    return (1, len(v), v)


def parse_vertex(text: str) -> str:
    """Validate a serialized vertex id and return it."""
    if text in OUTER:
        return text
    if text.startswith("C:") and all(ch in "012" for ch in text[2:]):
        return text
    raise ValueError(f"not a vertex id: {text!r}")


def normalize_edge(u: str, v: str) -> tuple[str, str]:
    return (u, v) if vertex_key(u) <= vertex_key(v) else (v, u)


def edge_key(u: str, v: str) -> str:
    a, b = normalize_edge(u, v)
    return f"{a}-{b}"


def parse_edge_key(key: str) -> tuple[str, str]:
    a, b = key.split("-")
    return normalize_edge(parse_vertex(a), parse_vertex(b))


# ---------------------------------------------------------------------------
# Face tree
# ---------------------------------------------------------------------------

def _check_path(p: str, max_depth: int | None) -> None:
    if max_depth is not None and len(p) > max_depth:
        raise DepthError(f"face path of depth {len(p)} exceeds maximum {max_depth}")


@lru_cache(maxsize=1 << 20)
def _corners(p: str) -> tuple[str, str, str]:
    if not p:
        return OUTER
    c = _corners(p[:-1])
    j = ord(p[-1]) - 48
    return ("C:" + p[:-1], c[j], c[(j + 1) % 3])


def face_corners(p: str, max_depth: int | None = None) -> tuple[str, str, str]:
    """Clockwise corners of face ``p``."""
    _check_path(p, max_depth)
    if p and not set(p) <= {"0", "1", "2"}:
        raise ValueError(f"not a face path: {p!r}")
    if len(p) > 400:
        # keep the cache recursion shallow for very deep paths
        for cut in range(400, len(p), 400):
            _corners(p[:cut])
    return _corners(p)


def child_containing(p: str, a: str, b: str) -> str:
    """The child face of ``p`` whose corners include both ``a`` and ``b``.

    ``a`` and ``b`` must be distinct vertices of the closed face ``p``;
    ``Center(p)`` counts as a vertex of every child.
    """
    c = face_corners(p)
    x = center(p)
    pair = {a, b}
    for j in range(3):
        if pair <= {x, c[j], c[(j + 1) % 3]}:
            return p + str(j)
    raise ValueError(f"no child of face {p!r} contains both {a} and {b}")


def children_containing(p: str, a: str) -> list[str]:
    """Child faces of ``p`` having ``a`` as a corner (two for a corner of p)."""
    c = face_corners(p)
    if a == center(p):
        return [p + "0", p + "1", p + "2"]
    return [p + str(j) for j in range(3) if a in (c[j], c[(j + 1) % 3])]


def face_contains_vertex(p: str, v: str) -> bool:
    """True iff ``v`` lies in the closed face ``p`` (corner or strictly inside)."""
    if v in face_corners(p):
        return True
    return not is_outer(v) and birth_face(v).startswith(p)


def triangle_face(a: str, b: str, c: str) -> str:
    """Face path of the triangle ``abc``.

    Every triangle of an iterated triangulation bounds a face of some
    Tr(i): its youngest vertex is a center whose other two vertices are
    corners of its birth face.
    """
    tri = sorted((a, b, c), key=vertex_key)
    if all(is_outer(v) for v in tri):
        return ""
    young = tri[2]
    return child_containing(birth_face(young), tri[0], tri[1])


def edge_faces(a: str, b: str, level: int) -> list[str]:
    """Faces of Tr(level) having ``ab`` as a side, sorted by path."""
    a, b = normalize_edge(a, b)
    if is_outer(b):
        start = [""]
    else:
        q = birth_face(b)
        if a not in face_corners(q):
            raise ValueError(f"{a}{b} is not an edge")
        start = children_containing(q, a)
        start = [f for f in start if b in face_corners(f)]
    out = []
    for f in start:
        if len(f) > level:
            raise DepthError(f"edge {a}{b} is born after round {level}")
        while len(f) < level:
            f = child_containing(f, a, b)
        out.append(f)
    return sorted(out)


def adjacent(u: str, v: str, max_depth: int | None = None) -> bool:
    """Adjacency in Tr(N) for N at least the birth rounds of both vertices."""
    if max_depth is not None and max(birth_round(u), birth_round(v)) > max_depth:
        raise DepthError("vertex born after the maximum depth")
    if u == v:
        return False
    if is_outer(u) and is_outer(v):
        return True
    a, b = normalize_edge(u, v)
    return a in face_corners(birth_face(b))


def iter_faces(p: str, levels: int) -> Iterator[str]:
    """Faces inside ``p`` down to ``levels`` rounds below it, breadth first."""
    frontier = [p]
    for _ in range(levels + 1):
        yield from frontier
        frontier = [f + d for f in frontier for d in "012"]


def neighbors_inside(c: str, p: str, max_level: int) -> Iterator[str]:
    """Neighbors of corner ``c`` strictly inside face ``p``, shallowest first.

    Only centers born in faces of depth below ``max_level`` are produced.
    """
    if c not in face_corners(p):
        raise ValueError(f"{c} is not a corner of face {p!r}")
    queue = deque([p])
    while queue:
        f = queue.popleft()
        if len(f) >= max_level:
            continue
        yield center(f)
        queue.extend(children_containing(f, c))


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------

def vertex_count(n: int) -> int:
    return 3 + (3 ** n - 1) // 2


def edge_count(n: int) -> int:
    return 3 * vertex_count(n) - 6


def face_count(n: int) -> int:
    return 3 ** n


# ---------------------------------------------------------------------------
# Explicit graphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExplicitGraph:
    """Materialized simple graph with dense vertex and edge ids.

    For Tr(n) ``depth`` is set and ``faces`` lists the 3**n inner faces as
    clockwise corner triples of vertex indices.  Generic hosts (used for
    oracle cross-checks) have ``depth=None`` and no faces.
    """

    depth: int | None
    vertices: tuple[str, ...]
    adjacency: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]
    faces: tuple[tuple[int, int, int], ...] = ()
    index: dict[str, int] = field(default_factory=dict, compare=False, repr=False)
    edge_index: dict[tuple[int, int], int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.index:
            self.index.update((v, i) for i, v in enumerate(self.vertices))
        if not self.edge_index:
            self.edge_index.update((e, i) for i, e in enumerate(self.edges))

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edge_id(self, i: int, j: int) -> int:
        return self.edge_index[(i, j) if i < j else (j, i)]

    def has_edge(self, i: int, j: int) -> bool:
        return ((i, j) if i < j else (j, i)) in self.edge_index

    def edge_labels(self, e: int) -> tuple[str, str]:
        i, j = self.edges[e]
        return self.vertices[i], self.vertices[j]

    @classmethod
    def from_edges(cls, vertices: Sequence[str], edges: Iterable[tuple[str, str]],
                   depth: int | None = None, faces: Sequence[tuple[str, str, str]] = ()) -> "ExplicitGraph":
        """Build a graph whose vertex ids follow the order of ``vertices``."""
        index = {v: i for i, v in enumerate(vertices)}
        if len(index) != len(vertices):
            raise ValueError("duplicate vertex ids")
        pairs = set()
        for u, v in edges:
            i, j = index[u], index[v]
            if i == j:
                raise ValueError(f"self-loop at {u}")
            pairs.add((i, j) if i < j else (j, i))
        edge_list = tuple(sorted(pairs))
        adj: list[list[int]] = [[] for _ in vertices]
        for i, j in edge_list:
            adj[i].append(j)
            adj[j].append(i)
        return cls(
            depth=depth,
            vertices=tuple(vertices),
            adjacency=tuple(tuple(sorted(a)) for a in adj),
            edges=edge_list,
            faces=tuple(tuple(index[c] for c in f) for f in faces),
            index=index,
        )

    def relabel(self, mapping: dict[str, str]) -> "ExplicitGraph":
        """Same graph with vertex ids renamed; ids and orders are kept."""
        verts = tuple(mapping[v] for v in self.vertices)
        return ExplicitGraph(self.depth, verts, self.adjacency, self.edges, self.faces)


def _face_levels(root: str, m: int) -> Iterator[tuple[int, list[str]]]:
    level = [root]
    for d in range(m + 1):
        yield d, level
        if d < m:
            level = [f + j for f in level for j in "012"]


def build_explicit(n: int, limit: int = DEFAULT_EXPLICIT_LIMIT) -> ExplicitGraph:
    """Materialize Tr(n) with deterministic vertex and edge ids."""
    if n < 0:
        raise ValueError("depth must be non-negative")
    if n > limit:
        raise BudgetError(f"Tr({n}) exceeds the explicit budget (limit {limit})")
    return _build_tree(n, "", OUTER)[0]


def _build_tree(m: int, root: str, boundary: tuple[str, str, str]
                ) -> tuple[ExplicitGraph, dict[str, str]]:
    """Materialize the Tr(m) copy inside face ``root``.

    Local ids are those of Tr(m) with ``boundary`` mapped onto (O0, O1, O2).
    Returns the local graph and the local -> global vertex mapping.
    """
    gc = face_corners(root)
    if set(boundary) != set(gc):
        raise ValueError(f"boundary {boundary} does not match corners {gc} of face {root!r}")
    mapping = {OUTER[j]: boundary[j] for j in range(3)}
    vertices = list(OUTER)
    index = {v: i for i, v in enumerate(OUTER)}
    edges = [(0, 1), (0, 2), (1, 2)]
    faces: list[tuple[int, int, int]] = []
    # (local path, corner indices, global path)
    level = [("", (0, 1, 2), root)]
    for d in range(m):
        nxt = []
        for lp, corners, gp in level:
            x = len(vertices)
            lv = "C:" + lp
            vertices.append(lv)
            index[lv] = x
            mapping[lv] = "C:" + gp
            for c in corners:
                edges.append((c, x))
            gcorn = face_corners(gp)
            gx = "C:" + gp
            for j in range(3):
                cc = (x, corners[j], corners[(j + 1) % 3])
                want = {gx, mapping[vertices[cc[1]]], mapping[vertices[cc[2]]]}
                gchild = next(gp + str(t) for t in range(3)
                              if {gx, gcorn[t], gcorn[(t + 1) % 3]} == want)
                nxt.append((lp + str(j), cc, gchild))
        level = nxt
    faces = [corners for _, corners, _ in level]
    adj: list[list[int]] = [[] for _ in vertices]
    norm = sorted((i, j) if i < j else (j, i) for i, j in edges)
    for i, j in norm:
        adj[i].append(j)
        adj[j].append(i)
    g = ExplicitGraph(
        depth=m,
        vertices=tuple(vertices),
        adjacency=tuple(tuple(sorted(a)) for a in adj),
        edges=tuple(norm),
        faces=tuple(faces),
        index=index,
    )
    return g, mapping


# ---------------------------------------------------------------------------
# Regions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegionRef:
    """Closed disc bounded by a face of Tr(N), viewed as a copy of Tr(m).

    ``boundary`` is the ordered triple (apex, left, right) of the face's
    corners; it is mapped to (O0, O1, O2) of the copy.
    """

    boundary: tuple[str, str, str]
    root_face: str
    remaining_depth: int

    def __post_init__(self) -> None:
        if set(self.boundary) != set(face_corners(self.root_face)) or len(set(self.boundary)) != 3:
            raise ValueError(f"boundary {self.boundary} does not bound face {self.root_face!r}")
        if self.remaining_depth < 0:
            raise ValueError("remaining depth must be non-negative")

    @property
    def apex(self) -> str:
        return self.boundary[0]

    @property
    def level(self) -> int:
        return len(self.root_face)

    @classmethod
    def root(cls, n: int) -> "RegionRef":
        return cls(OUTER, "", n)

    @classmethod
    def of_face(cls, face: str, boundary: Sequence[str], total_depth: int) -> "RegionRef":
        return cls(tuple(boundary), face, total_depth - len(face))

    def truncated(self, m: int) -> "RegionRef":
        return RegionRef(self.boundary, self.root_face, min(m, self.remaining_depth))

    def contains(self, v: str) -> bool:
        if not face_contains_vertex(self.root_face, v):
            return False
        return birth_round(v) <= self.level + self.remaining_depth


def region_subgraph(r: RegionRef, m: int, limit: int = DEFAULT_EXPLICIT_LIMIT
                    ) -> tuple[ExplicitGraph, dict[str, str]]:
    """Explicit Tr(m) copy of the region plus the local -> global vertex map."""
    if m > r.remaining_depth:
        raise DepthError(f"region has only {r.remaining_depth} levels, asked for {m}")
    if m > limit:
        raise BudgetError(f"Tr({m}) exceeds the explicit budget (limit {limit})")
    return _build_tree(m, r.root_face, r.boundary)


def region_graph(r: RegionRef, m: int, limit: int = DEFAULT_EXPLICIT_LIMIT) -> ExplicitGraph:
    """Region copy relabelled with global vertex ids."""
    g, mapping = region_subgraph(r, m, limit)
    return g.relabel(mapping)


# ---------------------------------------------------------------------------
# Implicit view
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ImplicitTr:
    """Tr(depth) answered on demand from face paths; nothing is stored."""

    depth: int

    def has_vertex(self, v: str) -> bool:
        try:
            parse_vertex(v)
        except ValueError:
            return False
        return birth_round(v) <= self.depth

    def adjacent(self, u: str, v: str) -> bool:
        return adjacent(u, v, self.depth)

    def corners(self, p: str) -> tuple[str, str, str]:
        return face_corners(p, self.depth - 1 if p else None)

    def neighbors(self, v: str) -> Iterator[str]:
        """All neighbors of ``v``: older ones first, then younger breadth first."""
        if birth_round(v) > self.depth:
            raise DepthError(f"{v} is not a vertex of Tr({self.depth})")
        if is_outer(v):
            yield from (o for o in OUTER if o != v)
            yield from neighbors_inside(v, "", self.depth)
            return
        q = birth_face(v)
        yield from face_corners(q)
        for child in (q + "0", q + "1", q + "2"):
            if len(child) < self.depth:
                # v is a corner of every child; recurse into each
                yield from neighbors_inside(v, child, self.depth)
