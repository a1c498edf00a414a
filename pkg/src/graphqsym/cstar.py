"""Structure data of a graph C*-algebra: normal forms, V_{2,+}, tau and F.

Elements of C*(Γ) in normal form are finite sums of monomials S_μ S_ν* with
t(μ) = t(ν); a monomial with both paths empty is a vertex projection p_v.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .graph import Graph, classify
from .ncpoly import GeneratorSet, Poly
from .presentations import Presentation


class Mono(NamedTuple):
    mu: tuple[int, ...]
    nu: tuple[int, ...]
    v: int  # common target vertex (the vertex itself when both paths are empty)


CStarCombo = dict  # Mono -> Fraction


class CStarError(ValueError):
    pass


def mono_adjoint(m: Mono) -> Mono:
    return Mono(m.nu, m.mu, m.v)


def _start(g: Graph, path, v) -> int:
    return g.source[path[0]] if path else v


def mono_mul(g: Graph, m1: Mono, m2: Mono) -> Mono | None:
    """Product of two normal-form monomials (None when it vanishes)."""
    mu1, nu1, v1 = m1
    mu2, nu2, v2 = m2
    if len(nu1) <= len(mu2):
        if mu2[:len(nu1)] != nu1:
            return None
        rho = mu2[len(nu1):]
        if not nu1 and _start(g, mu2, v2) != v1:
            return None
        if nu1 and not rho and v1 != v2:
            return None
        return Mono(mu1 + rho, nu2, v2)
    if nu1[:len(mu2)] != mu2:
        return None
    rho = nu1[len(mu2):]
    if not mu2 and _start(g, nu1, v1) != v2:
        return None
    return Mono(mu1, nu2 + rho, v1)


def expand_monomial(g: Graph, m: Mono, depth: int) -> list[Mono]:
    """Apply p_v = Σ_{s(f)=v} S_f S_f* to the shared target until depth or a sink."""
    if g.is_sink(m.v) or min(len(m.mu), len(m.nu)) >= depth:
        return [m]
    out = []
    for f in g.out_edges[m.v]:
        out.extend(expand_monomial(g, Mono(m.mu + (f,), m.nu + (f,), g.target[f]), depth))
    return out


def expand_combo(g: Graph, combo: dict, depth: int) -> dict:
    out: dict = {}
    for m, c in combo.items():
        for e in expand_monomial(g, m, depth):
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def is_path(g: Graph, edges) -> bool:
    return all(g.target[a] == g.source[b] for a, b in zip(edges, edges[1:]))


# ---------------------------------------------------------------------------
# the generators of C*(Γ) as an abstract *-algebra

def graph_generators(g: Graph) -> GeneratorSet:
    names = [f"S_{e}" for e, _, _ in g.edges] + [f"p_{v}" for v in g.vertices]
    return GeneratorSet(names, self_adjoint=[f"p_{v}" for v in g.vertices])


def letter_monomial(g: Graph, gens: GeneratorSet, a: int) -> Mono:
    idx = a >> 1
    n = g.n_edges
    if idx < n:
        if a & 1:
            return Mono((), (idx,), g.target[idx])
        return Mono((idx,), (), g.target[idx])
    return Mono((), (), idx - n)


def graph_algebra_presentation(g: Graph) -> Presentation:
    gens = graph_generators(g)
    S = [gens.gen(f"S_{e}") for e, _, _ in g.edges]
    Sd = [gens.gen(f"S_{e}", star=True) for e, _, _ in g.edges]
    p = [gens.gen(f"p_{v}") for v in g.vertices]
    rels, labels = [], []

    def add(r, label):
        rels.append(r)
        labels.append(label)

    for i in range(g.n_edges):
        add(Sd[i] * S[i] - p[g.target[i]], "partial-isometry")
    for v in range(g.n_vertices):
        if not g.is_sink(v):
            add(sum((S[e] * Sd[e] for e in g.out_edges[v]), Poly.zero()) - p[v], "cuntz-krieger")
    for v in range(g.n_vertices):
        add(p[v] * p[v] - p[v], "projection")
        for w in range(g.n_vertices):
            if w != v:
                add(p[v] * p[w], "orthogonal-projections")
    add(sum(p, Poly.zero()) - 1, "unit")
    for i in range(g.n_edges):
        for j in range(g.n_edges):
            if i != j:
                add(Sd[i] * S[j], "orthogonal-ranges")
    return Presentation(name="graph", gens=gens, relations=tuple(rels), labels=tuple(labels),
                        provenance="graph C*-algebra: partial isometries and vertex projections")


def word_to_combo(g: Graph, gens: GeneratorSet, w: bytes) -> dict:
    if not w:
        return {Mono((), (), v): Fraction(1) for v in range(g.n_vertices)}
    m = letter_monomial(g, gens, w[0])
    for a in w[1:]:
        m = mono_mul(g, m, letter_monomial(g, gens, a))
        if m is None:
            return {}
    return {m: Fraction(1)}


def normal_form(x, g: Graph, depth: int, gens: GeneratorSet | None = None) -> dict:
    """Normal form of a polynomial over graph_generators(g) (or of a CStarCombo)."""
    gens = gens or graph_generators(g)
    if isinstance(x, Poly):
        if x.degree() > depth:
            raise CStarError(f"insufficient depth: {depth} < word length {x.degree()}")
        combo: dict = {}
        for w, c in x.items():
            for m, k in word_to_combo(g, gens, w).items():
                v = combo.get(m, 0) + c * k
                if v:
                    combo[m] = v
                else:
                    combo.pop(m, None)
    else:
        if any(min(len(m.mu), len(m.nu)) > depth for m in x):
            raise CStarError("insufficient depth")
        combo = dict(x)
    return expand_combo(g, combo, depth)


def combo_adjoint(combo: dict) -> dict:
    return {mono_adjoint(m): c for m, c in combo.items()}


def format_monomial(g: Graph, m: Mono) -> str:
    if not m.mu and not m.nu:
        return f"p[{g.vertices[m.v]}]"
    left = "".join(f"S[{g.edge_name(e)}]" for e in m.mu)
    right = "".join(f"S[{g.edge_name(e)}]" for e in m.nu)
    if m.mu and m.nu:
        return f"{left}·({right})*" if len(m.nu) > 1 else f"{left}·{right}*"
    if m.mu:
        return left
    return f"({right})*" if len(m.nu) > 1 else f"{right}*"


def monomial_to_json(g: Graph, m: Mono) -> dict:
    return {"left_path": [g.edge_name(e) for e in m.mu],
            "right_path": [g.edge_name(e) for e in m.nu],
            "vertex": g.vertices[m.v]}


def combo_to_json(g: Graph, combo: dict) -> list[dict]:
    out = []
    for m in sorted(combo, key=lambda m: (len(m.mu) + len(m.nu), m)):
        c = Fraction(combo[m])
        d = {"coeff": f"{c.numerator}/{c.denominator}"}
        d.update(monomial_to_json(g, m))
        out.append(d)
    return out


# ---------------------------------------------------------------------------
# V_{2,+}, tau and F

@dataclass(frozen=True)
class V2PlusBasis:
    pair_set: tuple[tuple[int, int], ...]  # 1-based edge indices with equal targets
    sink_list: tuple[str, ...]

    def monomials(self, g: Graph) -> list[Mono]:
        out = [Mono((i - 1,), (j - 1,), g.target[i - 1]) for i, j in self.pair_set]
        out += [Mono((), (), g.vertex_index[v]) for v in self.sink_list]
        return out

    def __len__(self):
        return len(self.pair_set) + len(self.sink_list)


def v2plus_basis(g: Graph) -> V2PlusBasis:
    n = g.n_edges
    pairs = tuple((i + 1, j + 1) for i in range(n) for j in range(n) if g.target[i] == g.target[j])
    sinks = tuple(g.vertices[v] for v in g.sink_indices)
    return V2PlusBasis(pairs, sinks)


@dataclass(frozen=True)
class TauFunctional:
    graph: Graph

    def value(self, m: Mono) -> Fraction:
        if len(m.mu) == 1 and len(m.nu) == 1:
            return Fraction(int(m.mu == m.nu))
        if not m.mu and not m.nu and self.graph.is_sink(m.v):
            return Fraction(1)
        raise CStarError(f"{format_monomial(self.graph, m)} is not in V_2,+")

    def table(self) -> dict[Mono, Fraction]:
        g = self.graph
        return {m: self.value(m) for m in v2plus_basis(g).monomials(g)}

    def apply(self, combo: dict) -> Fraction:
        """τ of an element of V_{2,+} given in any normal form."""
        flat = expand_combo(self.graph, combo, 1)
        return sum((c * self.value(m) for m, c in flat.items()), Fraction(0))

    def pair(self, i: int, j: int) -> Fraction:
        """τ(S_i S_j*) for 1-based edge indices, extended by 0 off the pair set."""
        return Fraction(int(i == j))


def tau(g: Graph) -> TauFunctional:
    return TauFunctional(g)


def f_diagonal(g: Graph) -> list[int]:
    return [len(g.out_edges[g.target[i]]) or 1 for i in range(g.n_edges)]


def f_matrix(g: Graph) -> np.ndarray:
    return np.diag(np.array(f_diagonal(g), dtype=np.int64))


# ---------------------------------------------------------------------------
# finite-dimensional path-space model for acyclic graphs

def sink_paths(g: Graph) -> list[tuple[tuple[int, ...], int]]:
    """All paths ending at a sink as (edges, start vertex), length-0 ones included."""
    out = []
    frontier = [((), v) for v in g.sink_indices]
    while frontier:
        out.extend(frontier)
        nxt = []
        for path, start in frontier:
            for e in g.in_edges[start]:
                nxt.append(((e,) + path, g.source[e]))
        frontier = nxt
        if len(out) > 100000:
            raise CStarError("path space too large")
    return out


def path_space_rep(g: Graph):
    """Integer matrices for S_e and p_v acting on the span of sink-ending paths."""
    from .reps import MatrixRep

    if not classify(g).acyclic:
        raise CStarError("no finite-dimensional path-space model: graph has a cycle")
    basis = sink_paths(g)
    index = {b: k for k, b in enumerate(basis)}
    d = len(basis)
    mats = {}
    for i, (e, _, _) in enumerate(g.edges):
        M = np.zeros((d, d), dtype=np.int64)
        for (path, start), k in index.items():
            if g.target[i] == start:
                M[index[((i,) + path, g.source[i])], k] = 1
        mats[f"S_{e}"] = M
    for v, name in enumerate(g.vertices):
        M = np.zeros((d, d), dtype=np.int64)
        for (path, start), k in index.items():
            if start == v:
                M[k, k] = 1
        mats[f"p_{name}"] = M
    return MatrixRep(d, mats, seed=None)


def combo_matrix(g: Graph, rep, combo: dict) -> np.ndarray:
    """Evaluate a CStarCombo in a representation of graph_generators(g)."""
    d = rep.dim
    out = np.zeros((d, d), dtype=rep.dtype)
    for m, c in combo.items():
        M = rep.matrices[f"p_{g.vertices[m.v]}"]
        for e in reversed(m.mu):
            M = rep.matrices[f"S_{g.edge_name(e)}"] @ M
        for e in reversed(m.nu):
            M = M @ rep.matrices[f"S_{g.edge_name(e)}"].conj().T
        out = out + _scalar(c, rep.dtype) * M
    return out


def _scalar(c, dtype):
    c = Fraction(c)
    if np.issubdtype(dtype, np.integer):
        if c.denominator != 1:
            raise ValueError("non-integer coefficient in an integer representation")
        return int(c)
    return float(c)


@dataclass(frozen=True)
class RankReport:
    size: int
    rank: int

    @property
    def passed(self) -> bool:
        return self.rank == self.size


def check_basis_independence(g: Graph) -> RankReport:
    if not classify(g).acyclic:
        raise CStarError("not checkable numerically: cyclic graph has no path-space model")
    rep = path_space_rep(g)
    basis = v2plus_basis(g).monomials(g)
    vecs = np.array([combo_matrix(g, rep, {m: 1}).ravel() for m in basis], dtype=np.int64)
    gram = vecs @ vecs.T
    rank = int(np.linalg.matrix_rank(gram.astype(float)))
    return RankReport(len(basis), rank)
