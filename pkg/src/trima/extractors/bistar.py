"""Bistar replays: B_k around an apex whose star has one color, and B_k in
Tr(6k+30) for an arbitrary coloring."""

from __future__ import annotations

from ..colorings import ColoringOracle
from ..core import RegionRef, birth_round, center, child_containing, edge_faces, face_corners, triangle_face
from ..patterns import Bistar, Witness, cycle_witness
from .base import ApexCycle, Budget, ExtractOutcome, Replay, Unresolved, Violation
from .jellyfish import _two_hits_cycle


def assemble_bistar(k: int, color: int, cycle: list[str], leaves1: list[str], leaves2: list[str]) -> Witness:
    """``cycle[0]`` carries ``leaves1`` and ``cycle[2]`` carries ``leaves2``."""
    return Witness.build(Bistar(k), color, cycle=cycle, leaves1=leaves1[:k], leaves2=leaves2[:k])


def _side_leaves(rp: Replay, name: str, u: str, root: str, start: str, k: int, c0: int) -> list[str]:
    """k leaves at ``root`` from the ladder t_l inside (u, t_{l-1}, root), t_0 = start."""
    face = triangle_face(u, start, root)
    rp.trace.bounds(face, (u, start, root))
    ts, _ = rp.ladder(name, face, u, root, k + 1)
    for t in ts[1:]:
        rp.expect(u, t, c0)
    _two_hits_cycle(rp, u, root, ts[1:], c0)
    leaves = [t for t in ts[1:] if rp.sigma(root, t) == 1 - c0][:k]
    rp.trace.sets[name] = leaves
    return leaves


def bistar_under_star(rp: Replay, region: RegionRef, k: int, name: str = "star-b") -> Witness:
    """B_k in a region (apex u, v, w) whose u-edges share one color; touched
    edges only, as in ``jellyfish_under_star``."""
    u, v, w = region.boundary
    tr = rp.trace
    c0 = rp.sigma(u, v)
    c1 = 1 - c0
    tr.choices[f"{name}.star_color"] = c0
    xs, _ = rp.ladder(f"{name}.x", region.root_face, u, v, 6)
    for x in xs:
        rp.expect(u, x, c0)
    _two_hits_cycle(rp, u, v, xs, c0)
    i = next(i for i in range(5) if all(rp.sigma(v, xs[j]) == c1 for j in range(i, i + 3)))
    a, b, c = xs[i], xs[i + 1], xs[i + 2]
    tr.choices[f"{name}.window"] = i
    s_ab, s_bc = rp.sigma(a, b), rp.sigma(b, c)
    if s_ab == c0 and s_bc == c0:
        raise ApexCycle(cycle_witness([u, a, b, c], c0), u)
    if s_ab == s_bc:
        tr.choices[f"{name}.case"] = 1
        ys = _side_leaves(rp, f"{name}.y", u, a, b, k, c0)
        zs = _side_leaves(rp, f"{name}.z", u, c, b, k, c0)
        return assemble_bistar(k, c1, [a, b, c, v], ys, zs)
    tr.choices[f"{name}.case"] = 2
    # p is the chain vertex whose edge to the middle has color c0
    p = a if s_ab == c0 else c
    face = triangle_face(u, p, b)
    tr.bounds(face, (u, p, b))
    y = center(face)
    rp.expect(u, y, c0)
    if rp.sigma(y, p) == c0:
        raise ApexCycle(cycle_witness([u, y, p, b], c0), u)
    if rp.sigma(y, b) == c0:
        raise ApexCycle(cycle_witness([u, y, b, p], c0), u)
    ys = _side_leaves(rp, f"{name}.y", u, p, y, k, c0)
    zs = _side_leaves(rp, f"{name}.z", u, b, y, k, c0)
    return assemble_bistar(k, c1, [p, y, b, v], ys, zs)


def extract_bistar_under_star(oracle: ColoringOracle, region: RegionRef, k: int,
                              budget: Budget | None = None, depth: int | None = None) -> ExtractOutcome:
    """Replay on a Tr(k+10) region with apex u; see ``bistar_under_star``."""
    if k < 1:
        raise ValueError("k must be positive")
    total = depth if depth is not None else region.level + region.remaining_depth
    rp = Replay(oracle, total, budget or Budget(), "bistar-under-star")
    rp.trace.choices["k"] = k
    return rp.finish(lambda: bistar_under_star(rp, region, k))


# ---------------------------------------------------------------------------
# Full replay on Tr(6k+30)
# ---------------------------------------------------------------------------

def bistar_full(rp: Replay, k: int) -> Witness:
    tr = rp.trace
    n = rp.depth
    wit, depth = rp.c4_in_region(RegionRef.root(n).truncated(16))
    if wit is None:
        raise Unresolved("no monochromatic C4 in the Tr(16) sub-instance within budget", "C4")
    c1 = wit.color
    cyc = list(wit.roles["cycle"])
    tr.chain("u", cyc)
    tr.choices["C4.depth"] = depth

    faces, A = {}, {}
    for i in (0, 2):
        f = edge_faces(cyc[i], cyc[i + 1], 18)[0]
        tr.bounds(f, (cyc[i], cyc[i + 1], next(c for c in face_corners(f) if c not in cyc[i:i + 2])))
        faces[i] = f
        A[i], _ = rp.harvest(cyc[i], f, c1, k)
        tr.sets[f"A[{i + 1}]"] = A[i]
    if len(A[0]) >= k and len(A[2]) >= k:
        tr.choices["branch"] = "abundant"
        return assemble_bistar(k, c1, cyc, A[0], A[2])

    i = 0 if len(A[0]) < k else 2
    tr.choices["branch"] = "scarce"
    tr.choices["scarce.i"] = i + 1
    u1 = cyc[i]
    c0 = 1 - c1
    disc = rp.star_disc("G", faces[i], u1, cyc[i + 1], c0, k)
    others = [c for c in face_corners(disc) if c != u1]
    g = RegionRef.of_face(disc, (u1, others[0], others[1]), n)
    try:
        return _scarce(rp, k, g, u1, c0)
    except Violation as viol:
        raise Unresolved(f"u1-star color {viol.actual} at {viol.edge[0]}-{viol.edge[1]} below the scanned depth",
                         "G.star") from None


def _scarce(rp: Replay, k: int, g: RegionRef, u1: str, c0: int) -> Witness:
    tr = rp.trace
    c1 = 1 - c0
    wit, depth = rp.c4_in_region(g, anchors=[u1], color=c0)
    if wit is not None:
        cyc = list(wit.roles["cycle"])
    else:
        try:
            return bistar_under_star(rp, g, k, "u1-star")
        except ApexCycle as a:
            cyc = list(a.witness.roles["cycle"])
    j = cyc.index(u1)
    _, x, y, z = [cyc[(j + d) % 4] for d in range(4)]
    tr.chain("u1xyz", [u1, x, y, z])
    for t in (x, z):
        rp.expect(u1, t, c0)

    level = max(g.level, *(birth_round(t) for t in (x, y, z)))
    tr.choices["ladder.level"] = level

    def side(a: str, b: str) -> tuple[str, str]:
        f = edge_faces(a, b, level)[0]
        inner = child_containing(f, a, b)
        tr.bounds(inner, (a, b, center(f)))
        return f, inner

    (fp, pface), (fq, qface) = side(x, y), side(y, z)
    B1, _ = rp.harvest(x, pface, c0, k)
    B2, _ = rp.harvest(z, qface, c0, k)
    tr.sets["B1"], tr.sets["B2"] = B1, B2
    if len(B1) >= k and len(B2) >= k:
        tr.choices["outcome"] = "B1 and B2 stars"
        return assemble_bistar(k, c0, [x, y, z, u1], B1, B2)
    if len(B1) >= k:
        # symmetric case: the small set sits at z
        x, z, pface = z, x, qface
    p0 = next(c for c in face_corners(pface) if c not in (x, y))
    ps, pfaces = rp.ladder("p", pface, x, y, 3 * k)
    C = [l for l in range(1, 3 * k + 1) if rp.sigma(y, ps[l]) == c0]
    tr.sets["C"] = [ps[l] for l in C]
    if len(C) >= k:
        # u1 leaves from a face at the ladder level inside G, away from the ladders
        cands = [f for t in (x, z) for f in edge_faces(u1, t, level)
                 if f.startswith(g.root_face) and f not in (fp, fq)]
        if not cands:
            raise Unresolved("no face at u1 clear of the ladders", "C.u1_face")
        uf = cands[0]
        leaves = []
        for t in rp.apex_neighbors(u1, uf, rp.budget.verify_depth):
            rp.expect(u1, t, c0)
            leaves.append(t)
            if len(leaves) == k:
                break
        if len(leaves) < k:
            raise Unresolved("too few u1 neighbors within the scan depth", "C.u1_leaves")
        tr.choices["outcome"] = "C stars at y and u1"
        return assemble_bistar(k, c0, [y, z, u1, x], [ps[l] for l in C], leaves)

    both = [l for l in range(1, 3 * k + 1) if rp.sigma(x, ps[l]) == c1 and rp.sigma(y, ps[l]) == c1]
    if len(both) < 2:
        raise Unresolved("fewer than two ladder vertices joined to x and y by the cycle color", "final.ladder")
    h, s = both[0], both[1]
    xface = triangle_face(x, p0, ps[1])
    tr.bounds(xface, (x, p0, ps[1]))
    xl, _ = rp.harvest(x, xface, c1, k)
    if len(xl) < k:
        raise Unresolved("too few x leaves within the scan depth", "final.x_leaves")
    yl = [ps[l] for l in range(1, 3 * k + 1) if l not in (h, s) and rp.sigma(y, ps[l]) == c1][:k]
    if len(yl) < k:
        raise Unresolved("too few y leaves on the ladder", "final.y_leaves")
    tr.choices["outcome"] = "final cycle x p_h y p_s"
    return assemble_bistar(k, c1, [x, ps[h], y, ps[s]], xl, yl)


def extract_bistar(oracle: ColoringOracle, k: int, budget: Budget | None = None,
                   depth: int | None = None) -> ExtractOutcome:
    """Monochromatic B_k in Tr(depth) (6k+30 levels for the guarantee)."""
    if k < 1:
        raise ValueError("k must be positive")
    n = depth if depth is not None else 6 * k + 30
    rp = Replay(oracle, n, budget or Budget(), "bistar")
    rp.trace.choices["k"] = k
    return rp.finish(lambda: bistar_full(rp, k))
