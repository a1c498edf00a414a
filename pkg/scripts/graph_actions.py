"""Check the magic-unitary and diagonal coactions on sample and random graphs."""

import argparse

from graphqsym import (banica_coaction, diagonal_coaction, random_graph, sample_graph,
                       verify_homomorphism, verify_tau_preservation)


def summary(spec):
    hom = verify_homomorphism(spec)
    tp = verify_tau_preservation(spec)
    return sum(c.proved for c in hom), len(hom), sum(c.proved for c in tp), len(tp)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--random", type=int, default=10)
    args = ap.parse_args()
    for name in ("K2", "C4", "P2", "P3"):
        print(f"banica {name}: hom %d/%d, tau %d/%d" % summary(banica_coaction(sample_graph(name))))
    graphs = [(n, sample_graph(n)) for n in ("P2", "P3", "K2", "L2", "C4")]
    graphs += [(f"random#{s}", random_graph(s)) for s in range(args.random)]
    for name, g in graphs:
        print(f"diagonal {name} ({g.n_vertices}v/{g.n_edges}e): hom %d/%d, tau %d/%d"
              % summary(diagonal_coaction(g)))


if __name__ == "__main__":
    main()
