"""Target patterns and an independent checker for monochromatic witnesses.

A witness lists its vertices by role; its edge list is derived from the
roles.  ``verify_witness`` only uses the host's vertex/adjacency/color
queries, never detector or extractor internals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, NamedTuple, Protocol

from .core import ImplicitTr, normalize_edge, vertex_key

KINDS = ("cycle", "cycle_ge", "k23", "hplus", "flower", "star", "jellyfish", "bistar")


@dataclass(frozen=True)
class TargetPattern:
    kind: str
    k: int | None = None
    g: int | None = None  # jellyfish grandchildren per child

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown pattern kind {self.kind!r}")
        if self.kind in ("k23", "hplus"):
            if self.k is not None:
                raise ValueError(f"{self.kind} takes no parameter")
            return
        if self.k is None:
            raise ValueError(f"{self.kind} needs a size parameter")
        if self.kind in ("cycle", "cycle_ge") and self.k < 3:
            raise ValueError("cycles have length at least 3")
        if self.k < 1:
            raise ValueError("pattern size must be positive")
        if self.kind == "jellyfish":
            if self.g is None:
                object.__setattr__(self, "g", self.k - 1)
            if self.g < 0:
                raise ValueError("grandchildren count must be non-negative")
        elif self.g is not None:
            raise ValueError("only jellyfish take a grandchildren count")

    def __str__(self) -> str:
        if self.k is None:
            return self.kind
        if self.kind == "jellyfish":
            return f"jellyfish({self.k},g={self.g})"
        return f"{self.kind}({self.k})"

    def to_json(self) -> dict:
        d: dict[str, Any] = {"pattern": self.kind, "k": self.k}
        if self.kind == "jellyfish":
            d["g"] = self.g
        return d


def Cycle(k: int) -> TargetPattern:
    return TargetPattern("cycle", k)


def CycleGE(k: int) -> TargetPattern:
    return TargetPattern("cycle_ge", k)


K23 = TargetPattern("k23")
HPlus = TargetPattern("hplus")


def Flower(k: int) -> TargetPattern:
    return TargetPattern("flower", k)


def Star(k: int) -> TargetPattern:
    return TargetPattern("star", k)


def Jellyfish(k: int, g: int | None = None) -> TargetPattern:
    return TargetPattern("jellyfish", k, g)


def Bistar(k: int) -> TargetPattern:
    return TargetPattern("bistar", k)


def pattern_vertex_count(p: TargetPattern) -> int | None:
    """Vertex count of the pattern (None for open-ended ``cycle_ge``)."""
    k = p.k
    return {
        "cycle": k,
        "cycle_ge": None,
        "k23": 5,
        "hplus": 6,
        "flower": None if k is None else 3 * k + 1,
        "star": None if k is None else k + 1,
        "jellyfish": None if k is None else 3 * k + 1 + k + k * (p.g or 0),
        "bistar": None if k is None else 4 + 2 * k,
    }[p.kind]


# ---------------------------------------------------------------------------
# Witnesses
# ---------------------------------------------------------------------------

_ROLE_KEYS = {
    "cycle": ("cycle",),
    "cycle_ge": ("cycle",),
    "k23": ("pair", "triple"),
    "hplus": ("cycle", "pendants"),
    "flower": ("center", "petals"),
    "star": ("center", "leaves"),
    "jellyfish": ("center", "petals", "children", "grandchildren"),
    "bistar": ("cycle", "leaves1", "leaves2"),
}


class ShapeError(ValueError):
    pass


def _cycle_edges(vs: list[str]) -> list[tuple[str, str]]:
    return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]


def _petal_edges(c: str, petals: list[list[str]]) -> list[tuple[str, str]]:
    out = []
    for pet in petals:
        out += _cycle_edges([c, *pet])
    return out


def _check_shape(p: TargetPattern, roles: dict) -> list[str]:
    """Validate role sizes; return every listed vertex (with repeats)."""
    keys = _ROLE_KEYS[p.kind]
    if set(roles) != set(keys):
        raise ShapeError(f"roles {sorted(roles)} do not match {list(keys)}")

    def flat(x: Any) -> list[str]:
        if isinstance(x, str):
            return [x]
        return [v for y in x for v in flat(y)]

    def need(cond: bool, msg: str) -> None:
        if not cond:
            raise ShapeError(msg)

    k = p.k
    if p.kind == "cycle":
        need(len(roles["cycle"]) == k, f"cycle must list {k} vertices")
    elif p.kind == "cycle_ge":
        need(len(roles["cycle"]) >= k, f"cycle must list at least {k} vertices")
    elif p.kind == "k23":
        need(len(roles["pair"]) == 2 and len(roles["triple"]) == 3, "K23 needs a pair and a triple")
    elif p.kind == "hplus":
        need(len(roles["cycle"]) == 4 and len(roles["pendants"]) == 2, "H+ needs 4 cycle vertices and 2 pendants")
    elif p.kind in ("flower", "jellyfish"):
        need(len(roles["center"]) == 1, "one center")
        need(len(roles["petals"]) == k and all(len(x) == 3 for x in roles["petals"]),
             f"{k} petals of three vertices each")
        if p.kind == "jellyfish":
            need(len(roles["children"]) == k, f"{k} children")
            need(len(roles["grandchildren"]) == k and all(len(x) == p.g for x in roles["grandchildren"]),
                 f"{p.g} grandchildren per child")
    elif p.kind == "star":
        need(len(roles["center"]) == 1 and len(roles["leaves"]) == k, f"one center and {k} leaves")
    elif p.kind == "bistar":
        need(len(roles["cycle"]) == 4, "bistar cycle has 4 vertices")
        need(len(roles["leaves1"]) == k and len(roles["leaves2"]) == k, f"{k} leaves per star")
    vs = flat([roles[key] for key in keys])
    need(all(isinstance(v, str) for v in vs), "vertex ids are strings")
    return vs


def derive_edges(p: TargetPattern, roles: dict) -> list[tuple[str, str]]:
    """Pattern edges implied by the roles, normalized and sorted."""
    _check_shape(p, roles)
    kind = p.kind
    if kind in ("cycle", "cycle_ge"):
        es = _cycle_edges(list(roles["cycle"]))
    elif kind == "k23":
        es = [(a, x) for a in roles["pair"] for x in roles["triple"]]
    elif kind == "hplus":
        v1, v2 = roles["cycle"][0], roles["cycle"][1]
        es = _cycle_edges(list(roles["cycle"])) + [(v1, roles["pendants"][0]), (v2, roles["pendants"][1])]
    elif kind == "flower":
        es = _petal_edges(roles["center"][0], roles["petals"])
    elif kind == "star":
        c = roles["center"][0]
        es = [(c, x) for x in roles["leaves"]]
    elif kind == "jellyfish":
        c = roles["center"][0]
        es = _petal_edges(c, roles["petals"])
        for ch, gs in zip(roles["children"], roles["grandchildren"]):
            es.append((c, ch))
            es += [(ch, x) for x in gs]
    else:  # bistar
        cyc = roles["cycle"]
        es = _cycle_edges(list(cyc))
        es += [(cyc[0], x) for x in roles["leaves1"]]
        es += [(cyc[2], x) for x in roles["leaves2"]]
    key = lambda e: (vertex_key(e[0]), vertex_key(e[1]))
    return sorted((normalize_edge(u, v) for u, v in es), key=key)


def _expected_vertex_total(p: TargetPattern, vs: list[str]) -> int:
    n = pattern_vertex_count(p)
    return len(vs) if n is None else n


@dataclass
class Witness:
    pattern: TargetPattern
    color: int
    roles: dict[str, Any]
    edges: list[tuple[str, str]] = field(default_factory=list)

    @classmethod
    def build(cls, pattern: TargetPattern, color: int, **roles: Any) -> "Witness":
        clean = {k: _freeze(v) for k, v in roles.items()}
        return cls(pattern, color, clean, derive_edges(pattern, clean))

    def vertices(self) -> list[str]:
        return _check_shape(self.pattern, self.roles)

    def to_json(self) -> dict:
        return {
            **self.pattern.to_json(),
            "color": self.color,
            "roles": self.roles,
            "edges": [list(e) for e in self.edges],
        }

    @classmethod
    def from_json(cls, d: dict) -> "Witness":
        p = TargetPattern(d["pattern"], d.get("k"), d.get("g"))
        roles = {k: _freeze(v) for k, v in d["roles"].items()}
        return cls(p, int(d["color"]), roles, [tuple(e) for e in d.get("edges", [])])


def _freeze(v: Any) -> Any:
    if isinstance(v, str):
        return v
    return [_freeze(x) for x in v]


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

class Host(Protocol):
    def has_vertex(self, v: str) -> bool: ...
    def adjacent(self, u: str, v: str) -> bool: ...
    def color_of(self, u: str, v: str) -> int: ...


class ImplicitHost:
    """Tr(depth) colored by an oracle, queried lazily."""

    def __init__(self, oracle, depth: int):
        self.oracle = oracle
        self.tr = ImplicitTr(depth)

    def has_vertex(self, v: str) -> bool:
        return self.tr.has_vertex(v)

    def adjacent(self, u: str, v: str) -> bool:
        return self.tr.adjacent(u, v)

    def color_of(self, u: str, v: str) -> int:
        return self.oracle.color(u, v)


class UnknownVertex(KeyError):
    pass


class Verdict(NamedTuple):
    ok: bool
    diagnostic: str

    def __bool__(self) -> bool:
        return self.ok


def _as_host(host: Any) -> Host:
    if isinstance(host, tuple):
        oracle, depth = host
        return ImplicitHost(oracle, depth)
    return host


def verify_witness(host: Any, w: Witness) -> Verdict:
    """Check structure, adjacency and color uniformity of ``w`` in ``host``.

    ``host`` is a ColoredGraph, an ImplicitHost, or an ``(oracle, depth)``
    pair.  Raises UnknownVertex when a listed vertex is not in the host.
    """
    h = _as_host(host)
    if w.color not in (0, 1):
        return Verdict(False, f"invalid color {w.color!r}")
    try:
        vs = _check_shape(w.pattern, w.roles)
    except ShapeError as exc:
        return Verdict(False, f"shape: {exc}")
    for v in vs:
        if not h.has_vertex(v):
            raise UnknownVertex(v)
    if len(set(vs)) != len(vs):
        dup = next(v for v in vs if vs.count(v) > 1)
        return Verdict(False, f"vertex {dup} listed twice")
    if len(vs) != _expected_vertex_total(w.pattern, vs):
        return Verdict(False, "wrong number of vertices")
    derived = derive_edges(w.pattern, w.roles)
    listed = sorted((normalize_edge(*e) for e in w.edges), key=lambda e: (vertex_key(e[0]), vertex_key(e[1])))
    if listed != derived:
        return Verdict(False, "edge list does not match the roles")
    for u, v in derived:
        if not h.adjacent(u, v):
            return Verdict(False, f"missing edge {u}-{v}")
    for u, v in derived:
        if h.color_of(u, v) != w.color:
            return Verdict(False, f"edge color mismatch at {u}-{v}")
    return Verdict(True, "ok")


def cycle_witness(cycle: Iterable[str], color: int, exact: bool = True) -> Witness:
    vs = list(cycle)
    p = Cycle(len(vs)) if exact else CycleGE(len(vs))
    return Witness.build(p, color, cycle=vs)
