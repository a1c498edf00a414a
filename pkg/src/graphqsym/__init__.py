"""Computer algebra for quantum symmetries of graph C*-algebras."""

from .graph import (Graph, GraphError, parse_graph, load_graph, serialize_graph, classify,
                    adjacency_matrix, classical_automorphisms, sample_graph, random_graph,
                    path_graph, cycle_graph, cuntz_graph, complete_graph_k2)
from .ncpoly import GeneratorSet, Poly, MatrixLayout
from .rewrite import Caps, RewriteSystem, complete, reduce, prove_zero, antipode_transform, Prover
from .presentations import Presentation, aut_f, u_n_plus, s_n_plus, banica, free_circles, doubling
from .cstar import (normal_form, v2plus_basis, tau, f_matrix, path_space_rep,
                    check_basis_independence, graph_algebra_presentation)
from .action import (generic_coaction, expand, derive_action_constraints, derive_tau_constraints,
                     qlin_presentation, banica_coaction, diagonal_coaction, verify_homomorphism,
                     verify_tau_preservation)
from .reps import MatrixRep, verify_rep, builtin_rep, witness_noncommutativity

__version__ = "0.1.0"
