from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphqsym.cstar import (CStarError, Mono, check_basis_independence, combo_adjoint, combo_matrix,
                             f_diagonal, f_matrix, graph_algebra_presentation, graph_generators,
                             normal_form, path_space_rep, tau, v2plus_basis)
from graphqsym.graph import classify, complete_graph_k2, cuntz_graph, path_graph, random_graph
from graphqsym.ncpoly import Poly
from graphqsym.reps import verify_rep


def test_v2plus_and_tau_on_p2():
    g = path_graph(2)
    B = v2plus_basis(g)
    assert B.pair_set == ((1, 1), (2, 2)) and B.sink_list == ("v2",)
    assert len(B) == 3
    assert set(tau(g).table().values()) == {1}


def test_tau_rejects_outside_v2plus():
    g = path_graph(2)
    with pytest.raises(CStarError):
        tau(g).value(Mono((0,), (), 1))


def test_tau_of_vertex_projection_counts_out_edges():
    g = cuntz_graph(3)
    assert tau(g).apply({Mono((), (), 0): Fraction(1)}) == 3


def test_f_matrix_values():
    assert f_matrix(cuntz_graph(3)).tolist() == [[3, 0, 0], [0, 3, 0], [0, 0, 3]]
    assert f_matrix(complete_graph_k2()).tolist() == [[1, 0], [0, 1]]
    assert f_diagonal(path_graph(3)) == [1, 1, 1]


def test_normal_form_relations_vanish():
    g = complete_graph_k2()
    P = graph_algebra_presentation(g)
    for r in P.relations:
        assert normal_form(r, g, 4) == {}


def test_normal_form_depth_error():
    g = path_graph(2)
    gens = graph_generators(g)
    with pytest.raises(CStarError, match="insufficient depth"):
        normal_form(gens.parse("S_e1 S_e2 S_e2*"), g, 2)


def test_path_space_rep_is_exact():
    g = path_graph(3)
    rep = path_space_rep(g)
    assert rep.dtype.kind == "i"
    report = verify_rep(graph_algebra_presentation(g), rep)
    assert report.max_residual == 0.0


def test_path_space_rejects_cycles():
    with pytest.raises(CStarError):
        path_space_rep(cuntz_graph(1))


def test_basis_independence_p3():
    rep = check_basis_independence(path_graph(3))
    assert rep.passed and rep.size == 4


def _random_poly(g, rng, terms=3, length=3):
    gens = graph_generators(g)
    letters = gens.letters()
    p = Poly.zero()
    for _ in range(terms):
        w = bytes(int(rng.choice(letters)) for _ in range(int(rng.integers(0, length + 1))))
        p = p + Poly.word(w, int(rng.integers(-2, 3)))
    return gens, p


acyclic_seeds = [s for s in range(60) if classify(random_graph(s)).acyclic]


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(acyclic_seeds), st.integers(0, 1000))
def test_normal_form_matches_path_space(seed, pseed):
    g = random_graph(seed)
    rng = np.random.default_rng(pseed)
    gens, p = _random_poly(g, rng)
    rep = path_space_rep(g)
    nf = normal_form(p, g, 3, gens)
    assert np.array_equal(rep.evaluate(p, gens), combo_matrix(g, rep, nf))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 200), st.integers(0, 1000))
def test_normal_form_is_idempotent_star_map(seed, pseed):
    g = random_graph(seed)
    rng = np.random.default_rng(pseed)
    gens, p = _random_poly(g, rng)
    nf = normal_form(p, g, 3, gens)
    assert normal_form(nf, g, 3) == nf
    assert normal_form(p.star(gens), g, 3, gens) == combo_adjoint(nf)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 500))
def test_f_positive_diagonal(seed):
    F = f_matrix(random_graph(seed))
    assert (np.diag(F) > 0).all()
    assert np.count_nonzero(F - np.diag(np.diag(F))) == 0
