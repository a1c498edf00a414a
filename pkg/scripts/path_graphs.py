"""Off-diagonal vanishing and diagonal unitarity for the linear symmetries of P_n."""

import argparse
import time

from graphqsym import Caps, path_graph, prove_zero, qlin_presentation


def run(n, degree_cap):
    P = qlin_presentation(path_graph(n))
    G = P.gens
    rows = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            q, qs = G.gen(f"q_{i}_{j}"), G.gen(f"q_{i}_{j}", True)
            goals = [q] if i != j else [qs * q - 1, q * qs - 1]
            for goal in goals:
                t0 = time.perf_counter()
                res = prove_zero(goal, P.relations, G, Caps(degree=degree_cap),
                                 use_antipode=True, antipode_weights=P.weights)
                rules = sorted({s.kind for s in res.inferences})
                rows.append((G.format(goal), res.status, "+".join(rules) or "-",
                             res.antipode_used, time.perf_counter() - t0))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=3)
    ap.add_argument("--degree-cap", type=int, default=6)
    args = ap.parse_args()
    for n in range(2, args.max_n + 1):
        print(f"P_{n}")
        for goal, status, rules, anti, dt in run(n, args.degree_cap):
            print(f"  {goal:<24} {status:<8} inference={rules:<6} antipode={anti!s:<5} {dt:6.3f}s")


if __name__ == "__main__":
    main()
