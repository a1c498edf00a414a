"""Symbolic coactions on graph C*-algebras.

A coaction is stored by its values on the generators: ``α(S_i) = Σ_j S_j ⊗ c_ji``
and ``α(p_v)`` as a tensor combination. Products are expanded with left legs in
normal form, and right-leg coefficients are compared per left monomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .cstar import (Mono, TauFunctional, expand_monomial, f_diagonal, f_matrix,
                    format_monomial, graph_algebra_presentation, graph_generators,
                    mono_mul, v2plus_basis, CStarError)
from .graph import Graph, classify
from .ncpoly import GeneratorSet, MatrixLayout, Poly
from .presentations import Presentation, aut_f, banica, free_circles, _dedupe
from .rewrite import Caps, Prover, ProofResult, PROVED, UNKNOWN, _sum_of_squares

TensorCombo = dict  # Mono -> Poly


def _tadd(acc: dict, m: Mono, p: Poly):
    if not p:
        return
    cur = acc.get(m)
    s = p if cur is None else cur + p
    if s:
        acc[m] = s
    else:
        acc.pop(m, None)


def tensor_mul(g: Graph, x: TensorCombo, y: TensorCombo) -> TensorCombo:
    out: dict = {}
    for m1, a in x.items():
        for m2, b in y.items():
            m = mono_mul(g, m1, m2)
            if m is not None:
                _tadd(out, m, a * b)
    return out


def tensor_normalize(g: Graph, x: TensorCombo, depth: int) -> TensorCombo:
    out: dict = {}
    for m, p in x.items():
        for e in expand_monomial(g, m, depth):
            _tadd(out, e, p)
    return out


def unit_tensor(g: Graph) -> TensorCombo:
    return {Mono((), (), v): Poly.one() for v in range(g.n_vertices)}


@dataclass(frozen=True)
class CoactionSpec:
    graph: Graph
    target: Presentation
    edge_images: tuple  # edge_images[i] = {j: right leg of S_j in α(S_i)}
    vertex_images: tuple  # vertex_images[v] = TensorCombo for α(p_v)
    kind: str

    def letter_image(self, a: int) -> TensorCombo:
        g = self.graph
        idx = a >> 1
        if idx >= g.n_edges:
            return dict(self.vertex_images[idx - g.n_edges])
        out: dict = {}
        for j, p in self.edge_images[idx].items():
            if a & 1:
                _tadd(out, Mono((), (j,), g.target[j]), p.star(self.target.gens))
            else:
                _tadd(out, Mono((j,), (), g.target[j]), p)
        return out

    def describe(self) -> list[str]:
        g, tg = self.graph, self.target.gens
        lines = []
        for i in range(g.n_edges):
            terms = [f"S[{g.edge_name(j)}]⊗({tg.format(p)})" for j, p in sorted(self.edge_images[i].items())]
            lines.append(f"α(S[{g.edge_name(i)}]) = " + " + ".join(terms))
        for v in range(g.n_vertices):
            terms = [f"{format_monomial(g, m)}⊗({tg.format(p)})" for m, p in self.vertex_images[v].items()]
            lines.append(f"α(p[{g.vertices[v]}]) = " + (" + ".join(terms) or "0"))
        return lines


def expand(spec: CoactionSpec, x, depth: int = 4) -> TensorCombo:
    """Image of a polynomial in the generators of C*(Γ), left legs at the given depth."""
    g = spec.graph
    if isinstance(x, Mono):
        x = _mono_word(g, x)
    if x.degree() > depth:
        raise CStarError(f"insufficient depth: {depth} < word length {x.degree()}")
    return tensor_normalize(g, _expand_raw(spec, x), depth)


def _expand_raw(spec: CoactionSpec, x: Poly) -> TensorCombo:
    g = spec.graph
    out: dict = {}
    cache = {}
    for w, c in x.items():
        term = unit_tensor(g)
        for a in w:
            if a not in cache:
                cache[a] = spec.letter_image(a)
            term = tensor_mul(g, term, cache[a])
            if not term:
                break
        for m, p in term.items():
            _tadd(out, m, p.scale(c))
    return out


def _mono_word(g: Graph, m: Mono) -> Poly:
    gens = graph_generators(g)
    if not m.mu and not m.nu:
        return gens.gen(f"p_{g.vertices[m.v]}")
    p = Poly.one()
    for e in m.mu:
        p = p * gens.gen(f"S_{g.edge_name(e)}")
    for e in reversed(m.nu):
        p = p * gens.gen(f"S_{g.edge_name(e)}", star=True)
    return p


# ---------------------------------------------------------------------------
# the generic linear coaction and its constraints

def _q_layout(n: int) -> tuple[GeneratorSet, MatrixLayout]:
    layout = MatrixLayout.square(n, "q")
    names = [nm for _, _, nm in layout.entries()]
    return GeneratorSet(names, (), layout), layout


def _vertex_images(g: Graph, S, Sd) -> list[TensorCombo]:
    """α(p_v) via α(Σ S_e S_e*) (non-sink) or α(S_e* S_e) with e the first edge into v."""
    out = []
    for v in range(g.n_vertices):
        acc: dict = {}
        if not g.is_sink(v):
            for e in g.out_edges[v]:
                for m, p in tensor_mul(g, S[e], Sd[e]).items():
                    _tadd(acc, m, p)
        else:
            e = g.in_edges[v][0]
            acc = tensor_mul(g, Sd[e], S[e])
        out.append(acc)
    return out


def generic_coaction(g: Graph) -> CoactionSpec:
    n = g.n_edges
    gens, lay = _q_layout(n)
    F = f_diagonal(g)
    base = aut_f([[F[i] if i == j else 0 for j in range(n)] for i in range(n)], n, prefix="q")
    target = replace(base, name="generic")
    q = [[gens.gen(lay.names[i][j]) for j in range(n)] for i in range(n)]
    edge_images = tuple({j: q[j][i] for j in range(n)} for i in range(n))
    S = [{Mono((j,), (), g.target[j]): q[j][i] for j in range(n)} for i in range(n)]
    Sd = [{Mono((), (j,), g.target[j]): q[j][i].star(gens) for j in range(n)} for i in range(n)]
    return CoactionSpec(g, target, edge_images, tuple(_vertex_images(g, S, Sd)), "generic-linear")


@dataclass(frozen=True)
class Constraint:
    source: str  # "hom" | "tau" | "consistency"
    left_leg: str | None
    relation: Poly
    origin: str = ""

    def to_json(self, gens: GeneratorSet) -> dict:
        return {"source": self.source, "left_leg": self.left_leg, "relation": gens.format(self.relation)}


def _with_positivity(cs: list[Constraint], gens: GeneratorSet) -> list[Constraint]:
    """After each Σ x_i* x_i (one sign) constraint, add every x_i = 0."""
    out = []
    for c in cs:
        out.append(c)
        roots = _sum_of_squares(c.relation, gens) if c.relation else None
        for x in roots or ():
            # x = 0 iff x* = 0; keep the form with fewer adjoints
            xs = gens.star_word(x)
            if sum(a & 1 for a in xs) < sum(a & 1 for a in x):
                x = xs
            out.append(Constraint(c.source, c.left_leg, Poly.word(x), "positivity"))
    return out


def _dedupe_constraints(cs: list[Constraint], seen=None) -> list[Constraint]:
    seen = set() if seen is None else seen
    out = []
    for c in cs:
        if not c.relation:
            continue
        c = replace(c, relation=c.relation.monic())
        key = c.relation.monic()
        if key in seen:
            continue
        seen.add(key)
        out.append(c)
    return out


def derive_action_constraints(g: Graph, depth: int = 4, detailed: bool = False):
    """Right-leg coefficients of α(r) for every defining relation r of C*(Γ)."""
    spec = generic_coaction(g)
    gp = graph_algebra_presentation(g)
    out: list[Constraint] = []
    for r, label in zip(gp.relations, gp.labels):
        for m, p in expand(spec, r, depth).items():
            out.append(Constraint("hom", format_monomial(g, m), p, label))
    # every edge into a sink must give the same α(p_sink)
    gens = spec.target.gens
    for v in g.sink_indices:
        first = g.in_edges[v][0]
        for e in g.in_edges[v][1:]:
            x = expand(spec, _mono_word(g, Mono((), (e,), v)) * _mono_word(g, Mono((e,), (), v)), depth)
            y = expand(spec, _mono_word(g, Mono((), (first,), v)) * _mono_word(g, Mono((first,), (), v)), depth)
            diff = dict(x)
            for m, p in y.items():
                _tadd(diff, m, -p)
            for m, p in diff.items():
                out.append(Constraint("consistency", format_monomial(g, m), p, f"sink {g.vertices[v]}"))
    # α(p_v) must be a self-adjoint element
    for v in range(g.n_vertices):
        img = spec.vertex_images[v]
        adj = {}
        for m, p in img.items():
            _tadd(adj, Mono(m.nu, m.mu, m.v), p.star(gens))
        diff = dict(img)
        for m, p in adj.items():
            _tadd(diff, m, -p)
        for m, p in tensor_normalize(g, diff, depth).items():
            out.append(Constraint("hom", format_monomial(g, m), p, "self-adjoint"))
    out = _dedupe_constraints(out)
    return out if detailed else [c.relation for c in out]


def _tau_of(g: Graph, t: TensorCombo) -> Poly:
    tf = TauFunctional(g)
    acc = Poly.zero()
    for m, p in tensor_normalize(g, t, 1).items():
        acc = acc + p.scale(tf.value(m))
    return acc


def derive_tau_constraints(g: Graph, detailed: bool = False):
    """(τ⊗id)α(b) = τ(b)1 over V_{2,+}, plus the S_i* S_j family weighted by F."""
    spec = generic_coaction(g)
    n = g.n_edges
    gg = graph_generators(g)
    tf = TauFunctional(g)
    out: list[Constraint] = []
    S = [gg.gen(f"S_{e}") for e, _, _ in g.edges]
    Sd = [gg.gen(f"S_{e}", True) for e, _, _ in g.edges]
    for i in range(n):
        for j in range(n):
            # τ extends by zero to S_i S_j* with t(i) != t(j)
            val = tf.pair(i + 1, j + 1)
            out.append(Constraint("tau", f"S[{g.edge_name(i)}]·S[{g.edge_name(j)}]*",
                                  _tau_of(g, _expand_raw(spec, S[i] * Sd[j])) - val, "pair"))
    F = f_diagonal(g)
    for i in range(n):
        for j in range(n):
            val = Fraction(F[i]) if i == j else Fraction(0)
            out.append(Constraint("tau", f"S[{g.edge_name(i)}]*·S[{g.edge_name(j)}]",
                                  _tau_of(g, _expand_raw(spec, Sd[i] * S[j])) - val, "gram"))
    for v in g.sink_indices:
        out.append(Constraint("tau", f"p[{g.vertices[v]}]",
                              _tau_of(g, spec.vertex_images[v]) - 1, "sink"))
    out = _dedupe_constraints(out)
    return out if detailed else [c.relation for c in out]


def qlin_presentation(g: Graph, depth: int = 4) -> Presentation:
    spec = generic_coaction(g)
    base = spec.target
    rels = list(base.relations)
    labels = list(base.labels)
    for c in derive_action_constraints(g, depth, detailed=True):
        rels.append(c.relation)
        labels.append("action")
    for c in derive_tau_constraints(g, detailed=True):
        rels.append(c.relation)
        labels.append("tau")
    rels, labels = _dedupe(rels, labels)
    F = f_diagonal(g)
    return Presentation(
        name="qlin", gens=base.gens, relations=rels, labels=labels,
        coproduct="Δ(q_ij)=Σ_k q_ik⊗q_kj",
        provenance="A_{u^t}(F) with the constraints of a linear tau-preserving coaction",
        weights=tuple(Fraction(x) for x in F))


def derive_report(g: Graph, depth: int = 4) -> dict:
    gens, _ = _q_layout(g.n_edges)
    cs = derive_action_constraints(g, depth, detailed=True) + derive_tau_constraints(g, detailed=True)
    # x*x = 0 forces x = 0 in any C*-algebra; listed for readability
    cs = _dedupe_constraints(_with_positivity(cs, gens))
    return {
        "graph": {"vertices": list(g.vertices), "edges": [list(e) for e in g.edges]},
        "f_matrix": f_matrix(g).tolist(),
        "constraints": [c.to_json(gens) for c in cs],
        # left-leg monomials are treated as linearly independent in C*(Γ)
        "flags": {"independence_assumed": not classify(g).acyclic},
    }


# ---------------------------------------------------------------------------
# named coactions

def banica_coaction(g: Graph) -> CoactionSpec:
    P = banica(g)
    gens, lay = P.gens, P.gens.layout
    u = [[gens.gen(lay.names[i][j]) for j in range(g.n_vertices)] for i in range(g.n_vertices)]
    edge_images = []
    for j in range(g.n_edges):
        s, t = g.source[j], g.target[j]
        edge_images.append({l: u[s][g.source[l]] * u[t][g.target[l]] for l in range(g.n_edges)})
    vertex_images = tuple({Mono((), (), k): u[i][k] for k in range(g.n_vertices)}
                          for i in range(g.n_vertices))
    return CoactionSpec(g, P, tuple(edge_images), vertex_images, "banica")


def diagonal_coaction(g: Graph) -> CoactionSpec:
    P = free_circles(g.n_edges)
    z = [P.gens.gen(nm) for nm in P.gens.names]
    edge_images = tuple({i: z[i]} for i in range(g.n_edges))
    vertex_images = tuple({Mono((), (), v): Poly.one()} for v in range(g.n_vertices))
    return CoactionSpec(g, P, edge_images, vertex_images, "diagonal-free")


# ---------------------------------------------------------------------------
# verification

@dataclass
class RelationCheck:
    label: str
    relation: str
    status: str
    results: list[ProofResult] = field(default_factory=list)
    residuals: list[str] = field(default_factory=list)  # reduced forms of unproved coefficients

    @property
    def proved(self) -> bool:
        return self.status == PROVED

    def to_json(self) -> dict:
        return {"label": self.label, "relation": self.relation, "status": self.status,
                "residuals": list(self.residuals)}


def _prover(spec: CoactionSpec, caps: Caps) -> Prover:
    return Prover(spec.target.relations, spec.target.gens, caps)


def _check_coefficients(prover: Prover, label, text, coeffs) -> RelationCheck:
    results, residuals = [], []
    for p in coeffs:
        res = prover.prove(p)
        results.append(res)
        if not res.proved:
            residuals.append(prover.gens.format(prover.system.reduce(p)))
    status = PROVED if all(r.proved for r in results) else UNKNOWN
    return RelationCheck(label, text, status, results, residuals)


def verify_homomorphism(spec: CoactionSpec, depth: int = 4, caps: Caps = Caps()) -> list[RelationCheck]:
    g = spec.graph
    gp = graph_algebra_presentation(g)
    prover = _prover(spec, caps)
    out = []
    for r, label in zip(gp.relations, gp.labels):
        coeffs = list(expand(spec, r, depth).values())
        out.append(_check_coefficients(prover, label, gp.gens.format(r), coeffs))
    return out


def verify_tau_preservation(spec: CoactionSpec, caps: Caps = Caps()) -> list[RelationCheck]:
    g = spec.graph
    gg = graph_generators(g)
    tf = TauFunctional(g)
    prover = _prover(spec, caps)
    out = []
    basis = v2plus_basis(g)
    for m in basis.monomials(g):
        if m.mu:
            x = _mono_word(g, m)
        else:
            # a sink projection is S_e* S_e for any edge e into it
            e = g.in_edges[m.v][0]
            x = gg.gen(f"S_{g.edge_name(e)}", True) * gg.gen(f"S_{g.edge_name(e)}")
        goal = _tau_of(g, _expand_raw(spec, x)) - tf.value(m)
        out.append(_check_coefficients(prover, "tau", format_monomial(g, m), [goal]))
    return out


def corrupt(spec: CoactionSpec, i: int = 0, j: int = 1) -> CoactionSpec:
    """Swap the edge formulas of edges i and j (negative control)."""
    imgs = list(spec.edge_images)
    imgs[i], imgs[j] = imgs[j], imgs[i]
    return replace(spec, edge_images=tuple(imgs), kind=spec.kind + "-corrupted")
