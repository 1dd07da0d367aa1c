import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trima.sat import CnfFormula, solve


def brute_sat(f: CnfFormula) -> bool:
    return any(f.satisfied_by(m) for m in itertools.product([False, True], repeat=f.n_vars))


def random_cnf(rng, n, m, width=3):
    f = CnfFormula(n)
    for _ in range(m):
        vs = rng.sample(range(1, n + 1), min(width, n))
        f.add([v if rng.random() < 0.5 else -v for v in vs])
    return f


@pytest.mark.parametrize("seed", range(150))
def test_random_3cnf_matches_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 12)
    f = random_cnf(rng, n, rng.randint(1, 6 * n))
    res = solve(f)
    assert res.status == ("sat" if brute_sat(f) else "unsat")
    if res.model is not None:
        assert f.satisfied_by(res.model)


def pigeonhole(holes: int) -> CnfFormula:
    pigeons = holes + 1
    var = lambda p, h: p * holes + h + 1
    f = CnfFormula(pigeons * holes)
    for p in range(pigeons):
        f.add([var(p, h) for h in range(holes)])
    for h in range(holes):
        for p, q in itertools.combinations(range(pigeons), 2):
            f.add([-var(p, h), -var(q, h)])
    return f


@pytest.mark.parametrize("holes", [2, 3, 4, 5, 6])
def test_pigeonhole_unsat(holes):
    assert solve(pigeonhole(holes)).status == "unsat"


def test_budget_gives_unknown():
    assert solve(pigeonhole(9), max_conflicts=5).status == "unknown"


def test_empty_and_trivial():
    assert solve(CnfFormula(0)).status == "sat"
    f = CnfFormula(1)
    f.add([1])
    f.add([-1])
    assert solve(f).status == "unsat"
    g = CnfFormula(2)
    g.add([])
    assert solve(g).status == "unsat"


def test_stats_keys():
    res = solve(pigeonhole(3))
    assert set(res.stats) == {"conflicts", "decisions", "propagations", "seconds"}


def test_phase_hint_does_not_change_answer():
    rng = random.Random(4)
    for _ in range(30):
        f = random_cnf(rng, 10, 40)
        a = solve(f).status
        b = solve(f, phase=[True] * 10).status
        assert a == b


@settings(max_examples=60)
@given(st.lists(st.lists(st.integers(-8, 8).filter(bool), min_size=1, max_size=4), max_size=25))
def test_dimacs_roundtrip(clauses):
    f = CnfFormula(8, comments=["generated"])
    for cl in clauses:
        f.add(cl)
    g = CnfFormula.from_dimacs(f.to_dimacs())
    assert g.n_vars == 8 and g.clauses == f.clauses and g.comments == f.comments


def test_dimacs_errors():
    with pytest.raises(ValueError):
        CnfFormula.from_dimacs("1 2 0\n")
    with pytest.raises(ValueError):
        CnfFormula.from_dimacs("p cnf 2 2\n1 2 0\n")
    with pytest.raises(ValueError):
        CnfFormula.from_dimacs("p cnf 2 1\n1 2\n")
    with pytest.raises(ValueError):
        CnfFormula(2).add([3])


def test_agrees_with_pycosat():
    pycosat = pytest.importorskip("pycosat")
    rng = random.Random(99)
    for _ in range(60):
        f = random_cnf(rng, 25, rng.randint(60, 130))
        ref = pycosat.solve([list(c) for c in f.clauses])
        assert solve(f).status == ("unsat" if ref == "UNSAT" else "sat")
