import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphqsym.graph import (GraphError, VertexPermutation, adjacency_matrix, classical_automorphisms,
                             classify, complete_graph_k2, cuntz_graph, cycle_graph, induced_edge_map,
                             parse_graph, path_graph, random_graph, serialize_graph)


def test_parse_basic():
    g = parse_graph("# K2\nvertex a\nvertex b\nedge e1 a b  # forward\nedge e2 b a\n")
    assert g.vertices == ("a", "b")
    assert g.source == (0, 1) and g.target == (1, 0)


def test_vertices_declared_implicitly_by_edges():
    g = parse_graph("edge x u v\n")
    assert g.vertices == ("u", "v")
    assert g.sink_indices == (1,)


@pytest.mark.parametrize("text, fragment", [
    ("vertex a\nvertex a\nedge e a a", "duplicate vertex"),
    ("edge e a b\nedge e b a", "duplicate edge"),
    ("vertex a\nvertex b\nedge e a a", "not connected"),
    ("vertex a", "empty edge set"),
    ("edge e a", "expected"),
    ("node a", "unknown declaration"),
    ("edge e a b-c", "invalid id"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(GraphError) as err:
        parse_graph(text)
    assert fragment in str(err.value)


def test_error_has_position():
    with pytest.raises(GraphError) as err:
        parse_graph("edge e1 a b\n  bogus x\n")
    assert err.value.line == 2 and err.value.column == 3


def test_classify():
    c = classify(cuntz_graph(2))
    assert c.has_loop and c.has_multi_edge and not c.acyclic
    c = classify(path_graph(2))
    assert c.acyclic and c.sinks == {"v2"} and c.sources_only == {"v0"}
    assert not classify(cycle_graph(4)).acyclic


def test_adjacency_counts_multiplicity():
    assert adjacency_matrix(cuntz_graph(3)).tolist() == [[3]]
    assert adjacency_matrix(complete_graph_k2()).tolist() == [[0, 1], [1, 0]]


@pytest.mark.parametrize("g, order", [(complete_graph_k2(), 2), (path_graph(3), 1), (cycle_graph(4), 4),
                                      (cycle_graph(5), 5), (cuntz_graph(2), 1)])
def test_automorphism_orders(g, order):
    assert len(classical_automorphisms(g)) == order


def test_automorphism_cap():
    with pytest.raises(ValueError, match="too large"):
        classical_automorphisms(cycle_graph(12))


def test_automorphisms_form_a_group():
    auts = classical_automorphisms(cycle_graph(4))
    images = {a.image for a in auts}
    for a in auts:
        assert a.inverse().image in images
        for b in auts:
            assert a.compose(b).image in images
    assert any(a.is_identity() for a in auts)


def test_induced_edge_map():
    g = cycle_graph(4)
    rot = VertexPermutation((1, 2, 3, 0))
    assert induced_edge_map(g, rot) == {0: 1, 1: 2, 2: 3, 3: 0}
    assert induced_edge_map(path_graph(2), VertexPermutation((2, 1, 0))) is None


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_serialize_roundtrip(seed):
    g = random_graph(seed)
    assert parse_graph(serialize_graph(g)) == g


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_automorphisms_preserve_adjacency(seed):
    g = random_graph(seed, max_vertices=4)
    D = adjacency_matrix(g)
    for a in classical_automorphisms(g):
        P = np.eye(g.n_vertices, dtype=np.int64)[list(a.image)]
        assert (P.T @ D @ P == D).all()
