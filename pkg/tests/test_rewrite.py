import pytest
from hypothesis import given, settings, strategies as st

from graphqsym.ncpoly import GeneratorSet, Poly
from graphqsym.rewrite import Caps, Prover, antipode_transform, complete, prove_zero
from graphqsym.presentations import s_n_plus, u_n_plus

G = GeneratorSet(["x", "y"])


def test_caps_validation():
    with pytest.raises(ValueError):
        Caps(degree=0)


def test_commutation_completion():
    # x*x = 1 and x y = y x: x* y reduces to y x*
    sysm = complete([G.parse("x* x - 1"), G.parse("x x* - 1"), G.parse("x y - y x")], G)
    assert not sysm.reduce(G.parse("x* y x - y"))
    assert sysm.reduce(G.parse("x - y"))


def test_inconsistent_system():
    sysm = complete([G.parse("x - 1"), G.parse("x - 2")], G)
    assert sysm.inconsistent
    assert not sysm.reduce(G.parse("y y x"))


def test_truncation_flag():
    sysm = complete([G.parse("x y x - y")], G, Caps(degree=4))
    assert sysm.truncated


def test_s2_plus_commutative():
    P = s_n_plus(2)
    sysm = complete(P.relations, P.gens, Caps(degree=4))
    assert not sysm.reduce(P.parse("u_0_0 u_1_1 - u_1_1 u_0_0"))


def test_r1_needed():
    # x* x = 0 gives x = 0 only through the C*-rule
    rels = [G.parse("x* x")]
    assert not prove_zero(G.parse("x"), rels, G, Caps(degree=4), use_cstar_inference=False).proved
    res = prove_zero(G.parse("x"), rels, G, Caps(degree=4))
    assert res.proved and [s.kind for s in res.inferences] == ["R2"]
    assert res.replay() == 0


def test_r2_sum_of_squares():
    rels = [G.parse("x* x + y* y")]
    res = prove_zero(G.parse("y"), rels, G, Caps(degree=4))
    assert res.proved and {s.kind for s in res.inferences} == {"R2"}


def test_r1_products():
    # (x y)*(x y) = y* x* x y = 0 needs the length-2 candidate
    rels = [G.parse("x* x - y y*"), G.parse("y* y y* y - y* y"), G.parse("y* y y*")]
    res = prove_zero(G.parse("y"), rels, G, Caps(degree=6))
    assert res.proved


def test_unknown_is_reported():
    res = prove_zero(G.parse("x - y"), [G.parse("x* x - 1")], G, Caps(degree=4))
    assert res.status == "Unknown"


def test_antipode_transform_plain_and_weighted():
    U = u_n_plus(2, prefix="q")
    gens = U.gens
    assert antipode_transform(gens.parse("q_1_2"), gens) == gens.parse("q_2_1*")
    assert antipode_transform(gens.parse("q_1_2*"), gens) == gens.parse("q_2_1")
    assert antipode_transform(gens.parse("q_1_1 q_1_2"), gens) == gens.parse("q_2_1* q_1_1*")
    w = antipode_transform(gens.parse("q_1_2"), gens, [1, 2])
    assert w == gens.parse("2 q_2_1*")


def test_antipode_requires_layout():
    with pytest.raises(ValueError):
        prove_zero(G.parse("x"), [], G, use_antipode=True)


def test_antipode_recovers_transpose_unitarity():
    U = u_n_plus(2, prefix="q")
    gens = U.gens
    unitary = [gens.parse(s) for s in ("q_1_1* q_1_1 + q_2_1* q_2_1 - 1", "q_1_2* q_1_2 + q_2_2* q_2_2 - 1",
                                       "q_1_1* q_1_2 + q_2_1* q_2_2", "q_1_1 q_1_1* + q_1_2 q_1_2* - 1",
                                       "q_2_1 q_2_1* + q_2_2 q_2_2* - 1", "q_1_1 q_2_1* + q_1_2 q_2_2*")]
    goal = gens.parse("q_1_1 q_1_1* + q_2_1 q_2_1* - 1")
    assert not prove_zero(goal, unitary, gens, Caps(degree=4)).proved
    res = prove_zero(goal, unitary, gens, Caps(degree=4), use_antipode=True)
    assert res.proved and res.antipode_used
    assert res.flags["antipode_formula"] == "kappa(q_ij) = q_ji*"


def test_prover_reuses_facts():
    pr = Prover([G.parse("x* x")], G, Caps(degree=4))
    assert pr.prove(G.parse("x")).proved
    assert pr.prove(G.parse("x y")).proved


words = st.lists(st.sampled_from([0, 1, 2, 3]), max_size=5).map(bytes)
polys = st.dictionaries(words, st.integers(-3, 3), max_size=5).map(Poly)
SYSTEM = complete([G.parse("x* x - 1"), G.parse("y y - y"), G.parse("x y x* - y")], G, Caps(degree=6))


@settings(max_examples=100, deadline=None)
@given(polys, polys)
def test_reduce_idempotent_and_linear(p, q):
    r = SYSTEM.reduce(p)
    assert SYSTEM.reduce(r) == r
    assert SYSTEM.reduce(p + q) == r + SYSTEM.reduce(q)


@settings(max_examples=60, deadline=None)
@given(polys)
def test_trace_replays(p):
    trace = []
    r = SYSTEM.reduce(p, trace)
    cur = p
    for st_ in trace:
        cur = cur - Poly.word(st_.prefix, st_.coeff) * (Poly.word(st_.lead) - st_.rhs) * Poly.word(st_.suffix)
    assert cur == r
