"""Jellyfish replays: J_k around an apex whose star has one color, and
J_k in Tr(100k) for an arbitrary coloring."""

from __future__ import annotations

from ..colorings import ColoringOracle
from ..core import RegionRef, child_containing, edge_faces, face_corners, center, triangle_face
from ..patterns import Jellyfish, Witness, cycle_witness
from .base import ApexCycle, Budget, ExtractOutcome, Replay, Unresolved, Violation
from .flower import flower_in_region, petal_at


def assemble_jellyfish(k: int, color: int, c: str, petals: list[list[str]],
                       children: list[str], grand: list[list[str]]) -> Witness:
    return Witness.build(Jellyfish(k), color, center=[c], petals=petals,
                         children=children, grandchildren=grand)


def _two_hits_cycle(rp: Replay, u: str, hub: str, cands: list[str], c0: int) -> list[str]:
    """Candidates joined to ``hub`` by c0; two of them close a C4 through ``u``."""
    hits = [x for x in cands if rp.sigma(hub, x) == c0]
    if len(hits) >= 2:
        a, b = hits[0], hits[1]
        raise ApexCycle(cycle_witness([u, a, hub, b], c0), u)
    return hits


def jellyfish_under_star(rp: Replay, region: RegionRef, k: int, name: str = "star-j") -> Witness:
    """J_k centered at v in a region (apex u, v, w) whose u-edges share one color.

    The hypotheses are checked only on touched edges: a u-edge of the other
    color raises Violation, a C4 through u raises ApexCycle.
    """
    u, v, w = region.boundary
    tr = rp.trace
    c0 = rp.sigma(u, v)
    c1 = 1 - c0
    tr.choices[f"{name}.star_color"] = c0
    xs, _ = rp.ladder(f"{name}.x", region.root_face, u, v, 8 * k + 1)
    for x in xs:
        rp.expect(u, x, c0)
    _two_hits_cycle(rp, u, v, xs, c0)
    # window of 4k consecutive x_j with σ(v x_j) = c1
    i = next(i for i in range(4 * k + 3) if all(rp.sigma(v, xs[j]) == c1 for j in range(i, i + 4 * k)))
    tr.choices[f"{name}.window"] = i

    petals = []
    for r in range(k):
        a, b, c = xs[i + 3 * r], xs[i + 3 * r + 1], xs[i + 3 * r + 2]
        if rp.sigma(a, b) == c0 and rp.sigma(b, c) == c0:
            raise ApexCycle(cycle_witness([u, a, b, c], c0), u)
        s, t = (a, b) if rp.sigma(a, b) == c1 else (b, c)
        face = triangle_face(s, t, v)
        tr.bounds(face, (s, t, v))
        y = center(face)
        zero = [p for p in (s, t, v) if rp.sigma(y, p) == c0]
        if len(zero) >= 2:
            p, q = zero[0], zero[1]
            raise ApexCycle(cycle_witness([u, p, y, q], c0), u)
        good = [p for p in (s, t, v) if rp.sigma(y, p) == c1]
        p, q = good[0], good[1]
        third = next(x for x in (s, t, v) if x not in (p, q))
        petals.append(petal_at([y, p, third, q], v))
    tr.sets[f"{name}.F_v"] = [x for pet in petals for x in pet]

    children, grand = [], []
    for r in range(i + 3 * k, i + 4 * k):
        xr = xs[r]
        face = triangle_face(xs[r - 1], xr, u)
        tr.bounds(face, (xs[r - 1], xr, u))
        zs, _ = rp.ladder(f"{name}.z[{r}]", face, xr, u, k)
        for z in zs[1:]:
            rp.expect(u, z, c0)
        _two_hits_cycle(rp, u, xr, zs[1:], c0)
        leaves = [z for z in zs[1:] if rp.sigma(xr, z) == c1][: k - 1]
        tr.sets[f"{name}.H[{r}]"] = [xr, v, *leaves]
        children.append(xr)
        grand.append(leaves)
    return assemble_jellyfish(k, c1, v, petals, children, grand)


def extract_jellyfish_under_star(oracle: ColoringOracle, region: RegionRef, k: int,
                                 budget: Budget | None = None, depth: int | None = None) -> ExtractOutcome:
    """Replay on a Tr(9k+2) region with apex u; see ``jellyfish_under_star``."""
    if k < 1:
        raise ValueError("k must be positive")
    total = depth if depth is not None else region.level + region.remaining_depth
    rp = Replay(oracle, total, budget or Budget(), "jellyfish-under-star")
    rp.trace.choices["k"] = k
    return rp.finish(lambda: jellyfish_under_star(rp, region, k))


# ---------------------------------------------------------------------------
# Full replay on Tr(100k)
# ---------------------------------------------------------------------------

def _cycle_or_under_star(rp: Replay, region: RegionRef, k: int, name: str):
    """Look for a C4 through the apex inside ``region`` with the star color;
    fall back to the under-star replay.  Returns ("cycle", cycle) or ("witness", J_k)."""
    hub = region.apex
    col = rp.sigma(hub, region.boundary[1])
    wit, depth = rp.c4_in_region(region, anchors=[hub], color=col)
    if wit is not None:
        rp.trace.choices[f"{name}.search"] = depth
        return "cycle", list(wit.roles["cycle"])
    try:
        return "witness", jellyfish_under_star(rp, region, k, name)
    except ApexCycle as a:
        return "cycle", list(a.witness.roles["cycle"])
    except Violation as v:
        raise Unresolved(f"star at {hub} has color {v.actual} on {v.edge[0]}-{v.edge[1]} below the scanned depth",
                         f"{name}.star") from None


def jellyfish_full(rp: Replay, k: int) -> Witness:
    tr = rp.trace
    n = rp.depth
    base = RegionRef.root(n).truncated(76 * k)
    F = flower_in_region(rp, base, 2 * k, "F")
    c1 = F.color
    x = F.roles["center"][0]
    cyc = F.roles["petals"]  # petal i: x, a_{i,1}, a_{i,2}, a_{i,3}
    tr.choices["F.color"] = c1

    # harvest A_i for i in k+1..2k
    level = 76 * k
    a_faces, A = {}, {}
    for i in range(k, 2 * k):
        a1, a2 = cyc[i][0], cyc[i][1]
        f = edge_faces(a1, a2, level)[0]
        inner = child_containing(f, a1, a2)
        tr.bounds(inner, (a1, a2, center(f)))
        a_faces[i] = inner
        A[i], _ = rp.harvest(a1, inner, c1, k)
        tr.sets[f"A[{i + 1}]"] = A[i]
    scarce = [i for i in range(k, 2 * k) if len(A[i]) < k]
    if not scarce:
        tr.choices["branch"] = "abundant"
        return assemble_jellyfish(k, c1, x, [list(p) for p in cyc[:k]],
                                  [cyc[i][0] for i in range(k, 2 * k)],
                                  [A[i][: k - 1] for i in range(k, 2 * k)])

    i = scarce[0]
    tr.choices["branch"] = "scarce"
    tr.choices["scarce.i"] = i + 1
    u, a2 = cyc[i][0], cyc[i][1]
    c0 = 1 - c1
    disc = rp.star_disc("G", a_faces[i], u, a2, c0, k)
    cu = face_corners(disc)
    others = [c for c in cu if c != u]
    g = RegionRef.of_face(disc, (u, others[0], others[1]), n)
    v, w = others
    try:
        return _scarce(rp, k, g, u, v, c0)
    except Violation as viol:
        raise Unresolved(f"u-star color {viol.actual} at {viol.edge[0]}-{viol.edge[1]} below the scanned depth",
                         "G.star") from None


def _scarce(rp: Replay, k: int, g: RegionRef, u: str, v: str, c0: int) -> Witness:
    tr = rp.trace
    c1 = 1 - c0
    n = rp.depth
    xs, _ = rp.ladder("G.x", g.root_face, u, v, 4 * k)
    for y in xs:
        rp.expect(u, y, c0)

    # F' of color c0 centered at u
    petals = []
    for i in range(k, 2 * k):
        reg = rp.region((u, xs[2 * i + 1], xs[2 * i]), apex=u)
        kind, obj = _cycle_or_under_star(rp, reg, k, f"Fp[{i}]")
        if kind == "witness":
            tr.choices["outcome"] = f"under-star jellyfish in region {i}"
            return obj
        petals.append(petal_at(obj, u))
    tr.sets["F'"] = [y for p in petals for y in p]

    # B_j harvest
    B = {}
    for j in range(k):
        face = triangle_face(u, xs[j], xs[j + 1])
        tr.bounds(face, (u, xs[j], xs[j + 1]))
        B[j], _ = rp.harvest(xs[j], face, c0, k)
        tr.sets[f"B[{j}]"] = B[j]
    small = [j for j in range(k) if len(B[j]) < k]
    if not small:
        tr.choices["outcome"] = "B_j stars at u"
        return assemble_jellyfish(k, c0, u, petals, xs[:k], [B[j][: k - 1] for j in range(k)])
    j = small[0]
    xj = xs[j]
    tr.choices["B.j"] = j

    face = triangle_face(u, xj, xs[j + 1])
    ps, pfaces = rp.ladder("p", face, u, xj, 4 * k)
    for p in ps[1:]:
        rp.expect(u, p, c0)
    ell, disc = None, None
    for l in range(4 * k):
        d = child_containing(pfaces[l], xj, ps[l])
        tr.bounds(d, (xj, ps[l], ps[l + 1]))
        if rp.star_scan(xj, d, c1) is None:
            ell, disc = l, d
            break
    if ell is None:
        raise Unresolved(f"every disc x_j p_l p_(l+1) has an x_j-edge of color {c0}", "Fpp.disc")
    tr.choices["Fpp.ell"] = ell

    # F'' of color c1 centered at x_j
    zs, zfaces = rp.ladder("z", disc, xj, ps[ell], 2 * k)
    petals2 = []
    for s in range(k):
        reg = rp.region((xj, zs[2 * s + 1], zs[2 * s]), apex=xj)
        kind, obj = _cycle_or_under_star(rp, reg, k, f"Fpp[{s}]")
        if kind == "witness":
            tr.choices["outcome"] = f"under-star jellyfish at x_j in region {s}"
            return obj
        petals2.append(petal_at(obj, xj))
    f2 = {y for p in petals2 for y in p} | {xj}
    tr.sets["F''"] = sorted(f2)

    # final assembly
    alphas = [m for m in range(1, 4 * k + 1)
              if m not in (ell, ell + 1) and ps[m] not in f2 and rp.sigma(ps[m], xj) == c1][: 2 * k]
    if len(alphas) < 2 * k:
        raise Unresolved("fewer than 2k ladder vertices qualify for the alpha set", "final.alpha")
    tr.sets["alpha"] = [ps[m] for m in alphas]
    stars = []
    for m in alphas:
        a = ps[m]
        rp.expect(u, a, c0)
        nface = triangle_face(a, ps[m - 1], u)
        tr.bounds(nface, (a, ps[m - 1], u))
        nh = []
        for y in rp.apex_neighbors(a, nface, n):
            nh.append(y)
            if len(nh) == 2 * k:
                break
        if len(nh) < 2 * k:
            raise Unresolved("host too shallow for the N_h sets", "final.N_h")
        by = {c0: [y for y in nh if rp.sigma(a, y) == c0], c1: [y for y in nh if rp.sigma(a, y) == c1]}
        col = c0 if len(by[c0]) >= k - 1 else c1
        stars.append((col, a, by[col][: k - 1]))
    for col in (c0, c1):
        chosen = [s for s in stars if s[0] == col][:k]
        if len(chosen) < k:
            continue
        if col == c0:
            tr.choices["outcome"] = "final stars at u"
            return assemble_jellyfish(k, c0, u, petals, [s[1] for s in chosen], [s[2] for s in chosen])
        tr.choices["outcome"] = "final stars at x_j"
        return assemble_jellyfish(k, c1, xj, petals2, [s[1] for s in chosen], [s[2] for s in chosen])
    raise AssertionError("pigeonhole over 2k stars failed")


def extract_jellyfish(oracle: ColoringOracle, k: int, budget: Budget | None = None,
                      depth: int | None = None) -> ExtractOutcome:
    """Monochromatic J_k in Tr(depth) (100k levels for the guarantee)."""
    if k < 1:
        raise ValueError("k must be positive")
    n = depth if depth is not None else 100 * k
    rp = Replay(oracle, n, budget or Budget(), "jellyfish")
    rp.trace.choices["k"] = k
    return rp.finish(lambda: jellyfish_full(rp, k))
