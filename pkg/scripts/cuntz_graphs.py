"""Compare the derived constraints of L_n with the free unitary quantum group relations."""

import argparse

from graphqsym import (Caps, Prover, aut_f, complete, cuntz_graph, derive_action_constraints,
                       derive_tau_constraints, f_matrix, u_n_plus)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ns", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--degree-cap", type=int, default=4)
    args = ap.parse_args()
    caps = Caps(degree=args.degree_cap)
    for n in args.ns:
        g = cuntz_graph(n)
        F = f_matrix(g)
        A = aut_f(F.tolist(), n, prefix="q")
        derived = derive_action_constraints(g) + derive_tau_constraints(g)
        sysA = complete(A.relations, A.gens, caps)
        fwd = sum(not sysA.reduce(r) for r in derived)
        U = u_n_plus(n, prefix="q")
        pr = Prover(derived, A.gens, caps, use_cstar_inference=False, use_antipode=True,
                    antipode_weights=[int(F[i, i]) for i in range(n)])
        back = [pr.prove(r) for r in U.relations]
        print(f"L_{n}: F = {n}*Id: {bool((F == n * (F > 0)).all())}; derived -> A(F): {fwd}/{len(derived)}; "
              f"U_n+ -> derived: {sum(r.proved for r in back)}/{len(back)} (antipode used: {pr.antipode_used})")


if __name__ == "__main__":
    main()
