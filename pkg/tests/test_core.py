import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trima.core import (
    OUTER,
    BudgetError,
    DepthError,
    ImplicitTr,
    RegionRef,
    adjacent,
    birth_face,
    birth_round,
    build_explicit,
    center,
    child_containing,
    children_containing,
    edge_count,
    edge_faces,
    edge_key,
    face_contains_vertex,
    face_corners,
    face_count,
    iter_faces,
    neighbors_inside,
    normalize_edge,
    parse_edge_key,
    parse_vertex,
    region_graph,
    region_subgraph,
    triangle_face,
    vertex_count,
)

paths = st.text(alphabet="012", max_size=7)


@pytest.mark.parametrize("n", range(0, 8))
def test_counts_match_closed_forms(n):
    g = build_explicit(n)
    assert g.n_vertices == vertex_count(n) == 3 + (3**n - 1) // 2
    assert g.n_edges == edge_count(n) == 3 * g.n_vertices - 6
    assert len(g.faces) == face_count(n) == 3**n


def test_small_cases_by_hand():
    assert build_explicit(0).vertices == OUTER
    g = build_explicit(1)
    assert g.n_vertices == 4 and g.n_edges == 6  # K4
    assert all(len(a) == 3 for a in g.adjacency)


def test_explicit_graph_is_planar_and_maximal():
    for n in range(1, 6):
        g = build_explicit(n)
        h = nx.Graph(list(g.edges))
        assert nx.check_planarity(h)[0]
        assert h.number_of_edges() == 3 * h.number_of_nodes() - 6


def test_face_corners_child_rule():
    assert face_corners("") == OUTER
    assert face_corners("0") == ("C:", "O0", "O1")
    assert face_corners("1") == ("C:", "O1", "O2")
    assert face_corners("2") == ("C:", "O2", "O0")
    assert face_corners("21") == ("C:2", "O2", "O0")


def test_face_corners_rejects_bad_paths():
    with pytest.raises(ValueError):
        face_corners("013")
    with pytest.raises(DepthError):
        face_corners("0000", max_depth=3)


@given(paths)
def test_children_partition_corners(p):
    cs = face_corners(p)
    x = center(p)
    kids = [face_corners(p + d) for d in "012"]
    assert all(k[0] == x for k in kids)
    assert sorted(c for k in kids for c in k[1:]) == sorted(cs * 2)


@given(paths, st.integers(0, 2))
def test_child_containing_and_triangle_face(p, j):
    cs = face_corners(p)
    a, b = cs[j], cs[(j + 1) % 3]
    q = child_containing(p, a, b)
    assert q == p + str(j)
    assert triangle_face(*face_corners(q)) == q
    assert len(children_containing(p, a)) == 2
    assert len(children_containing(p, center(p))) == 3


@given(paths)
def test_birth_face_roundtrip(p):
    v = center(p)
    assert birth_face(v) == p
    assert birth_round(v) == len(p) + 1
    assert parse_vertex(v) == v
    for c in face_corners(p):
        assert adjacent(v, c)
        assert face_contains_vertex(p, c)


def test_vertex_and_edge_keys():
    assert normalize_edge("C:0", "O2") == ("O2", "C:0")
    assert edge_key("C:0", "O2") == "O2-C:0"
    assert parse_edge_key("C:0-O2") == ("O2", "C:0")
    with pytest.raises(ValueError):
        parse_vertex("X1")


@pytest.mark.parametrize("n", [2, 3, 4])
def test_implicit_adjacency_matches_explicit(n):
    g = build_explicit(n)
    tr = ImplicitTr(n)
    for i, j in itertools.combinations(range(g.n_vertices), 2):
        assert tr.adjacent(g.vertices[i], g.vertices[j]) == g.has_edge(i, j)
    for i, v in enumerate(g.vertices):
        assert sorted(tr.neighbors(v)) == sorted(g.vertices[j] for j in g.adjacency[i])


def test_every_triangle_is_a_face_of_some_level():
    g = build_explicit(4)
    adj = [set(a) for a in g.adjacency]
    for i in range(g.n_vertices):
        for j in adj[i]:
            for k in adj[i] & adj[j]:
                if i < j < k:
                    tri = (g.vertices[i], g.vertices[j], g.vertices[k])
                    assert set(face_corners(triangle_face(*tri))) == set(tri)


def test_edge_faces():
    fs = edge_faces("O0", "O1", 2)
    assert fs == ["01"]
    fs = edge_faces("C:", "O1", 2)
    assert len(fs) == 2 and all(len(f) == 2 for f in fs)
    assert all({"C:", "O1"} <= set(face_corners(f)) for f in fs)
    with pytest.raises(DepthError):
        edge_faces("C:00", "O0", 1)


def test_neighbors_inside_is_breadth_first():
    got = list(neighbors_inside("O0", "", 3))
    assert got[0] == "C:"
    assert [birth_round(v) for v in got] == sorted(birth_round(v) for v in got)
    g = build_explicit(3)
    expect = {g.vertices[j] for j in g.adjacency[g.index["O0"]]} - set(OUTER)
    assert set(got) == expect


def test_iter_faces_counts():
    assert sum(1 for _ in iter_faces("1", 2)) == 1 + 3 + 9


def test_region_graph_is_a_relabelled_copy():
    r = RegionRef.of_face("12", face_corners("12"), 6)
    assert r.remaining_depth == 4 and r.level == 2
    g = region_graph(r, 3)
    ref = build_explicit(3)
    assert g.n_vertices == ref.n_vertices and g.n_edges == ref.n_edges
    for i, j in g.edges:
        assert adjacent(g.vertices[i], g.vertices[j])
    assert all(r.contains(v) for v in g.vertices)
    local, mapping = region_subgraph(r, 2)
    assert mapping["O0"] == r.boundary[0]
    with pytest.raises(DepthError):
        region_graph(r, 5)


def test_region_boundary_must_match():
    with pytest.raises(ValueError):
        RegionRef(("O0", "O1", "C:"), "", 3)


def test_explicit_budget_guard():
    with pytest.raises(BudgetError):
        build_explicit(15)


@settings(max_examples=50)
@given(paths.filter(lambda p: len(p) >= 1))
def test_implicit_tr_membership(p):
    tr = ImplicitTr(len(p) + 1)
    assert tr.has_vertex(center(p))
    assert not ImplicitTr(len(p)).has_vertex(center(p))
    assert not tr.has_vertex("C:9")
