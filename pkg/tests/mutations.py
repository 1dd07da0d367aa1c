"""Valid witnesses of every pattern kind, and single mutations that break them."""

import copy
import itertools
import random

from trima.colorings import SeededRandom, materialize
from trima.core import RegionRef
from trima.detectors import find_mono_c4, find_mono_cycle_ge, find_mono_hplus, find_mono_k23
from trima.extractors import extract_bistar, extract_flower, extract_jellyfish
from trima.patterns import ImplicitHost, Star, Witness, verify_witness


def _star(cg, k):
    g = cg.graph
    for i, v in enumerate(g.vertices):
        for c in (0, 1):
            leaves = [g.vertices[j] for j in cg.adj_c[c][i]]
            if len(leaves) >= k:
                return Witness.build(Star(k), c, center=[v], leaves=leaves[:k])
    return None


def witness_pool(seeds=range(1, 6)):
    """Pairs (host, witness) covering all eight pattern kinds."""
    pool = []
    for s in seeds:
        cg = materialize(5, SeededRandom(s))
        for w in (find_mono_c4(cg), find_mono_k23(cg), find_mono_hplus(cg),
                  find_mono_cycle_ge(cg, 5), _star(cg, 3)):
            if w is not None:
                pool.append((cg, w))
        oracle = SeededRandom(s)
        out = extract_flower(oracle, RegionRef.root(38), 1)
        pool.append((ImplicitHost(oracle, 38), out.witness))
        out = extract_jellyfish(oracle, 1, depth=100)
        pool.append((ImplicitHost(oracle, 100), out.witness))
        out = extract_jellyfish(oracle, 2, depth=200)
        if out.kind == "witness":
            pool.append((ImplicitHost(oracle, 200), out.witness))
        for k in (1, 2):
            out = extract_bistar(oracle, k, depth=6 * k + 30)
            pool.append((ImplicitHost(oracle, 6 * k + 30), out.witness))
    return pool


def _paths(roles):
    """Index paths to every vertex slot in the role dict."""
    out = []
    for key in sorted(roles):
        val = roles[key]
        for i, x in enumerate(val):
            if isinstance(x, str):
                out.append((key, i))
            else:
                out += [(key, i, j) for j in range(len(x))]
    return out


def _get(roles, path):
    x = roles[path[0]]
    for i in path[1:]:
        x = x[i]
    return x


def _set(roles, path, v):
    x = roles[path[0]]
    for i in path[1:-1]:
        x = x[i]
    x[path[-1]] = v


def _candidates(host, w):
    """Host vertices near the witness, for substitution mutations."""
    vs = w.vertices()
    if hasattr(host, "graph"):
        g = host.graph
        near = {g.vertices[j] for v in vs for j in g.adjacency[g.index[v]]}
    else:
        near = {n for v in vs for n in itertools.islice(host.tr.neighbors(v), 12)}
    return sorted(near - set(vs))


def _breaks(host, w, mutant):
    """True when some pattern edge is missing or off-color in the host."""
    for u, v in mutant.edges:
        if u == v or not host.adjacent(u, v) or host.color_of(u, v) != w.color:
            return True
    return False


def mutate(host, w, rng):
    """One mutation of ``w`` that no valid witness survives, with its label."""
    kind = rng.randrange(6)
    m = copy.deepcopy(w)
    paths = _paths(m.roles)
    if kind == 0:
        m.color ^= 1
        return "flip-color", m
    if kind == 1:
        a, b = rng.sample(paths, 2)
        _set(m.roles, a, _get(m.roles, b))
        return "duplicate-vertex", Witness.build(m.pattern, m.color, **m.roles)
    if kind == 2:
        i = rng.randrange(len(m.edges))
        del m.edges[i]
        return "drop-edge", m
    if kind == 3:
        vs = w.vertices()
        extra = next((a, b) for a in vs for b in vs if a < b and (a, b) not in m.edges)
        m.edges.append(extra)
        return "extra-edge", m
    if kind == 4:
        key = rng.choice(sorted(m.roles))
        lst = m.roles[key]
        if len(lst) > 1 and isinstance(lst[-1], str):
            lst.pop()
        else:
            lst.append(lst[0])
        return "resize-role", m
    # substitute a listed vertex by an outside vertex that breaks an edge
    cands = _candidates(host, w)
    rng.shuffle(cands)
    for path in rng.sample(paths, len(paths)):
        for x in cands[:40]:
            trial = copy.deepcopy(w.roles)
            _set(trial, path, x)
            mt = Witness.build(w.pattern, w.color, **trial)
            if _breaks(host, w, mt):
                return "substitute", mt
    m.color ^= 1
    return "flip-color", m


def run_mutations(pool, trials, seed=0):
    """Count (trials, rejected, per-kind counts, first escape)."""
    rng = random.Random(seed)
    rejected, kinds, escape = 0, {}, None
    for t in range(trials):
        host, w = pool[t % len(pool)]
        label, m = mutate(host, w, rng)
        kinds[label] = kinds.get(label, 0) + 1
        if not verify_witness(host, m).ok:
            rejected += 1
        elif escape is None:
            escape = (label, w.to_json(), m.to_json())
    return trials, rejected, kinds, escape
