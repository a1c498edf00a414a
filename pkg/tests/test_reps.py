import json

import numpy as np
import pytest

from graphqsym.action import qlin_presentation
from graphqsym.graph import complete_graph_k2, cuntz_graph, path_graph, sample_graph
from graphqsym.presentations import banica, free_circles
from graphqsym.reps import (MatrixRep, RepError, applicable_reps, builtin_rep, haar_unitary,
                            spectral_norm, verify_rep, witness_noncommutativity)


def test_scalar_unitaries():
    rep = MatrixRep(1, {"z_1": [[1.0]], "z_2": [[1.0]]})
    assert verify_rep(free_circles(2), rep).passed


def test_missing_generator_and_shape():
    with pytest.raises(RepError):
        verify_rep(free_circles(2), MatrixRep(1, {"z_1": [[1.0]]}))
    with pytest.raises(RepError):
        MatrixRep(2, {"z_1": np.eye(3)})


def test_unknown_family():
    with pytest.raises(RepError):
        builtin_rep("nope")


def test_haar_unitary_seeded():
    a = haar_unitary(3, np.random.default_rng(5))
    b = haar_unitary(3, np.random.default_rng(5))
    assert np.allclose(a, b)
    assert np.allclose(a.conj().T @ a, np.eye(3))


@pytest.mark.parametrize("seed", [7, 8])
def test_k2_doubling_unitarity(seed):
    rep = builtin_rep("k2-doubling", {"d": 3}, seed)
    Q = qlin_presentation(complete_graph_k2())
    assert verify_rep(Q, rep).passed
    m = rep.matrices
    U = np.block([[m["q_1_1"], m["q_1_2"]], [m["q_2_1"], m["q_2_2"]]])
    Ut = np.block([[m["q_1_1"], m["q_2_1"]], [m["q_1_2"], m["q_2_2"]]])
    for X in (U, Ut):
        assert spectral_norm(X.conj().T @ X - np.eye(12)) < 1e-9
        assert spectral_norm(X @ X.conj().T - np.eye(12)) < 1e-9


def test_cuntz_classical_l2():
    rep = builtin_rep("cuntz-classical", {"n": 2}, 3)
    assert verify_rep(qlin_presentation(cuntz_graph(2)), rep).passed


def test_banica_identity_all_samples():
    for name in ("P1", "P2", "P3", "K2", "C4"):
        g = sample_graph(name)
        assert verify_rep(banica(g), builtin_rep("banica-classical", {"graph": g})).passed


def test_path_diagonal_fails_k2_doubling_check():
    # a nonzero residual must show up for a relation that is not a consequence
    Q = qlin_presentation(complete_graph_k2())
    rep = builtin_rep("k2-doubling", {"d": 2}, 1)
    x = spectral_norm(rep.evaluate(Q.parse("q_1_1 - q_2_2"), Q.gens))
    assert x > 0.1


def test_applicable_families():
    g = path_graph(2)
    fams = {r.family for r in applicable_reps(qlin_presentation(g), 2, 0, g)}
    assert fams == {"path-diagonal"}


def test_json_roundtrip():
    rep = builtin_rep("k2-doubling", {"d": 2}, 4)
    back = MatrixRep.from_json(json.loads(json.dumps(rep.to_json())))
    assert all(np.allclose(back.matrices[k], v) for k, v in rep.matrices.items())


def test_report_json():
    rep = builtin_rep("k2-doubling", {"d": 2}, 4)
    data = verify_rep(qlin_presentation(complete_graph_k2()), rep).to_json()
    assert data["pass"] and data["seed"] == 4 and data["per_relation"]


def test_witness_and_none():
    g = sample_graph("K2")
    w = witness_noncommutativity(qlin_presentation(g), d=2, seed=0, trials=10, graph=g)
    assert w is not None and w.norm > 0.1 and {w.a, w.b} == {"q_1_1", "q_2_2"}
    g = sample_graph("P1")
    assert witness_noncommutativity(qlin_presentation(g), d=2, seed=0, trials=10, graph=g) is None
