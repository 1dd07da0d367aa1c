import itertools

import networkx as nx
import pytest

from trima.arrowing import (
    EXHAUSTIVE_LIMIT_BITS,
    UnsupportedPattern,
    arrows_exhaustive,
    arrows_sat,
    build_cnf,
    detect,
    enumerate_copies,
    export_dimacs,
    fixed_edge,
    parse_target,
    threshold_search,
)
from trima.core import build_explicit
from trima.patterns import K23, Cycle, Flower
from trima.sat import CnfFormula
from trima.colorings import SchemeA, materialize
from trima.detectors import find_mono_cycle_ge

# copy counts frozen from the networkx cross-check below
COPIES = {
    (1, "C4"): 3, (2, "C4"): 24, (2, "C5"): 36, (2, "K23"): 18,
}


def _nx_cycles(g, k):
    h = nx.Graph(list(g.edges))
    return sum(1 for c in nx.simple_cycles(h, length_bound=k) if len(c) == k)


def _nx_k23(g):
    h = nx.Graph(list(g.edges))
    total = 0
    for a, b in itertools.combinations(h.nodes, 2):
        m = len(set(h[a]) & set(h[b]))
        total += m * (m - 1) * (m - 2) // 6
    return total


@pytest.mark.parametrize("n, code", sorted(COPIES))
def test_copy_counts(n, code):
    g = build_explicit(n)
    p = parse_target(code)
    got = len(enumerate_copies(g, p))
    assert got == COPIES[(n, code)]
    ref = _nx_k23(g) if code == "K23" else _nx_cycles(g, int(code[1]))
    assert got == ref


@pytest.mark.parametrize("n", [3, 4])
def test_copy_counts_deeper_match_networkx(n):
    g = build_explicit(n)
    assert len(enumerate_copies(g, Cycle(4))) == _nx_cycles(g, 4)
    assert len(enumerate_copies(g, K23)) == _nx_k23(g)


def test_copies_are_distinct_edge_sets():
    g = build_explicit(3)
    for p in (Cycle(4), Cycle(5), K23):
        cps = enumerate_copies(g, p)
        assert len(set(cps)) == len(cps)


def test_parse_target():
    assert parse_target("C4") == Cycle(4)
    assert parse_target("k2,3") == K23
    with pytest.raises(UnsupportedPattern):
        parse_target("c6")
    with pytest.raises(UnsupportedPattern):
        build_cnf(build_explicit(1), Flower(1))


def test_tr1_does_not_arrow_c4():
    r = arrows_exhaustive(1, Cycle(4))
    assert r.status == "not_arrows"
    assert detect(r.certificate, Cycle(4)) is None
    assert r.certificate.graph.n_edges == 6


def test_k4_avoids_c3():
    # K4 is below the Ramsey number R(3,3)=6
    assert arrows_exhaustive(1, Cycle(3)).status == "not_arrows"
    assert arrows_sat(1, Cycle(3)).status == "not_arrows"


@pytest.mark.parametrize("n", [0, 1, 2])
@pytest.mark.parametrize("code", ["C3", "C4", "K23"])
def test_exhaustive_and_sat_agree(n, code):
    p = parse_target(code)
    a, b = arrows_exhaustive(n, p), arrows_sat(n, p)
    assert a.status == b.status
    for r in (a, b):
        if r.certificate is not None:
            assert detect(r.certificate, p) is None


def test_exhaustive_limit():
    assert build_explicit(3).n_edges > EXHAUSTIVE_LIMIT_BITS
    with pytest.raises(ValueError):
        arrows_exhaustive(3, Cycle(4))


def test_c4_threshold_is_five():
    rep = threshold_search(Cycle(4), n_max=16, budget=120)
    assert rep.threshold == 5 and rep.status == "arrows" and rep.monotone()
    for r in rep.steps[:-1]:
        assert detect(r.certificate, Cycle(4)) is None


def test_c4_threshold_confirmed_by_pycosat():
    pycosat = pytest.importorskip("pycosat")
    for n, expect in ((4, "sat"), (5, "unsat")):
        for sym in (True, False):
            f = build_cnf(build_explicit(n), Cycle(4), symmetry=sym)
            ref = pycosat.solve([list(c) for c in f.clauses])
            assert ("unsat" if ref == "UNSAT" else "sat") == expect


@pytest.mark.parametrize("n", range(0, 6))
def test_c5_never_arrowed(n):
    r = arrows_sat(n, Cycle(5))
    assert r.status == "not_arrows"
    assert detect(r.certificate, Cycle(5)) is None


@pytest.mark.parametrize("n", range(2, 6))
def test_scheme_a_is_a_c5_certificate(n):
    cg = materialize(n, SchemeA())
    assert detect(cg, Cycle(5)) is None
    assert find_mono_cycle_ge(cg, 5) is None


def test_unknown_on_tiny_budget():
    r = arrows_sat(6, Cycle(4), budget=None, max_conflicts=1)
    assert r.status == "unknown"
    rep = threshold_search(Cycle(4), n_max=3, budget=60)
    assert rep.status == "not_arrows" and rep.threshold is None


def test_symmetry_clause_and_dimacs(tmp_path):
    g = build_explicit(2)
    with_sym = build_cnf(g, Cycle(4))
    without = build_cnf(g, Cycle(4), symmetry=False)
    assert len(with_sym.clauses) == len(without.clauses) + 1
    assert with_sym.clauses[-1] == (-(fixed_edge(g) + 1),)
    out = tmp_path / "c4.cnf"
    f = export_dimacs(2, Cycle(4), out)
    assert len(f.clauses) == 2 * COPIES[(2, "C4")]
    assert CnfFormula.read(out).clauses == f.clauses
