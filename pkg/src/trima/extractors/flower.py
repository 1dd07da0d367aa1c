"""Flower replay: a monochromatic F_k in a region of depth 38k."""

from __future__ import annotations

from ..colorings import ColoringOracle
from ..core import RegionRef
from ..patterns import Flower, Witness
from .base import Budget, ExtractOutcome, Replay, Unresolved


def petal_at(cycle: list[str], c: str) -> list[str]:
    """The three other vertices of a 4-cycle, read from ``c`` around."""
    i = cycle.index(c)
    return [cycle[(i + d) % 4] for d in (1, 2, 3)]


def assemble_flower(k: int, color: int, c: str, cycles: list[list[str]]) -> Witness:
    return Witness.build(Flower(k), color, center=[c], petals=[petal_at(cy, c) for cy in cycles[:k]])


def pick_k(found: list[tuple[int, list[str]]], k: int) -> tuple[int, list[list[str]]] | None:
    """First color (scanning in order) that reaches k cycles, with its first k."""
    by = {0: [], 1: []}
    for c, cy in found:
        by[c].append(cy)
        if len(by[c]) == k:
            return c, by[c]
    return None


def flower_in_region(rp: Replay, region: RegionRef, k: int, name: str = "flower") -> Witness:
    """Replay on ``region`` (apex u, then v, w); returns the flower or raises."""
    u, v, w = region.boundary
    tr = rp.trace
    total = region.level + region.remaining_depth
    xs, xfaces = rp.ladder(f"{name}.x", region.root_face, u, v, 2 * k)
    hits: dict[int, tuple[int, list[str]]] = {}

    def branch_one(i: int) -> bool:
        g_i = rp.region((xs[i], u, xs[i + 1]), apex=u, total=total)
        wit, depth = rp.c4_in_region(g_i, anchors=[u], avoid=[xs[i]])
        tr.choices[f"{name}.branch1[{i}]"] = depth if wit is not None else None
        if wit is None:
            return False
        hits[i] = (wit.color, list(wit.roles["cycle"]))
        return True

    i = 0
    while i < 2 * k:
        if i not in hits and not branch_one(i):
            # no C4 through u inside G_i within budget: switch to x_{i+1}
            out = _branch_two(rp, k, name, u, xs, i, hits, total)
            if out is not None:
                return out
            continue  # branch two turned up a branch-one hit for i
        got = pick_k([hits[j] for j in sorted(hits)], k)
        if got is not None:
            tr.choices[f"{name}.branch"] = 1
            return assemble_flower(k, got[0], u, got[1])
        i += 1
    raise Unresolved("branch one collected fewer than k cycles of one color", f"{name}.branch1")


def _branch_two(rp: Replay, k: int, name: str, u: str, xs: list[str], i: int,
                hits: dict, total: int) -> Witness | None:
    tr = rp.trace
    x1 = xs[i + 1]
    g_face = rp.region((xs[i], u, x1), apex=u).root_face
    ys, yfaces = rp.ladder(f"{name}.y[{i}]", g_face, u, x1, 18 * (2 * k - 1))
    found: list[tuple[int, list[str]]] = []
    for h in range(2 * k):
        z = ys[18 * h]
        r_h = RegionRef.of_face(yfaces[18 * h], (x1, u, z), total)
        wit, depth = rp.c4_in_region(r_h, anchors=[u, x1], avoid=[z])
        if wit is None:
            raise Unresolved(f"no C4 meeting {{u, x_{i + 1}}} in region {h} within budget",
                             f"{name}.branch2[{i}].region[{h}]")
        cyc = list(wit.roles["cycle"])
        if u in cyc:
            # lies inside G_i, contains u and avoids x_i: a branch-one hit after all
            tr.notes.append(f"{name}: branch two region {h} produced a cycle through u for i={i}")
            hits[i] = (wit.color, cyc)
            return None
        found.append((wit.color, cyc))
        got = pick_k(found, k)
        if got is not None:
            tr.choices[f"{name}.branch"] = 2
            tr.choices[f"{name}.pivot"] = i
            return assemble_flower(k, got[0], x1, got[1])
    raise Unresolved("branch two collected fewer than k cycles of one color", f"{name}.branch2[{i}]")


def extract_flower(oracle: ColoringOracle, region: RegionRef, k: int,
                   budget: Budget | None = None, depth: int | None = None) -> ExtractOutcome:
    """Monochromatic F_k inside ``region`` (needs 38k levels for the guarantee)."""
    if k < 1:
        raise ValueError("k must be positive")
    total = depth if depth is not None else region.level + region.remaining_depth
    rp = Replay(oracle, total, budget or Budget(), "flower")
    rp.trace.choices["k"] = k
    return rp.finish(lambda: flower_in_region(rp, region, k))
