"""K2 pipeline: norm and orthogonality relations, the generator map into the doubling, and random block reps."""

import argparse

from graphqsym import (Caps, Prover, complete_graph_k2, doubling, free_circles, prove_zero,
                       qlin_presentation)
from graphqsym.presentations import map_relations
from graphqsym.reps import builtin_rep, verify_rep

PHI = {"q_1_1": "xi_z_1", "q_1_2": "eta_z_1", "q_2_1": "eta_z_2", "q_2_2": "xi_z_2"}
PHI_INV = {"iota_1": "q_1_1 q_1_1*", "iota_2": "q_1_2 q_1_2*", "xi_z_1": "q_1_1",
           "eta_z_1": "q_1_2", "eta_z_2": "q_2_1", "xi_z_2": "q_2_2"}


def relation_goals(P):
    p = P.parse
    goals = ["q_1_1* q_1_1 - q_2_2 q_2_2*", "q_2_1* q_2_1 - q_1_2* q_1_2",
             "q_1_1 q_1_1* - q_2_2* q_2_2", "q_2_1 q_2_1* - q_1_2* q_1_2",
             "q_1_1 q_1_2", "q_1_2 q_1_1", "q_2_1 q_1_1", "q_1_1 q_2_1",
             "q_2_2 q_1_2", "q_1_2 q_2_2", "q_2_2 q_2_1", "q_2_1 q_2_2"]
    for i in (1, 2):
        for j in (1, 2):
            x = f"q_{i}_{j}"
            goals += [f"{x}* {x} - {x} {x}*", f"{x} {x}* {x} - {x}"]
    return [p(g) for g in goals]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--degree-cap", type=int, default=6)
    ap.add_argument("--dim", type=int, default=3)
    args = ap.parse_args()
    caps = Caps(degree=args.degree_cap)
    Q = qlin_presentation(complete_graph_k2())
    for goal in relation_goals(Q):
        res = prove_zero(goal, Q.relations, Q.gens, caps, use_antipode=True, antipode_weights=Q.weights)
        print(f"{Q.format(goal):<32} {res.status}  antipode={res.antipode_used}")
    D = doubling(free_circles(2), {"z_1": "z_2", "z_2": "z_1"})
    for src, tgt, m in ((Q, D, PHI), (D, Q, PHI_INV)):
        pr = Prover(tgt.relations, tgt.gens, caps)
        ok = sum(pr.prove(r).proved for r in map_relations(src, tgt, m))
        print(f"{src.name} -> {tgt.name}: {ok}/{len(src.relations)} images proved")
    for seed in (1, 2, 3):
        rep = builtin_rep("k2-doubling", {"d": args.dim}, seed)
        print(f"k2-doubling seed {seed}: qlin residual {verify_rep(Q, rep).max_residual:.2e}, "
              f"doubling residual {verify_rep(D, rep).max_residual:.2e}")


if __name__ == "__main__":
    main()
