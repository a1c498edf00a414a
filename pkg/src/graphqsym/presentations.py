"""Generators-and-relations presentations of the compact quantum groups in play.

Coproducts are carried as descriptive strings only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Sequence

from .ncpoly import GeneratorSet, MatrixLayout, Poly, star_close, substitute


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Presentation:
    name: str
    gens: GeneratorSet
    relations: tuple[Poly, ...]
    labels: tuple[str, ...] = ()
    coproduct: str | None = None
    provenance: str = ""
    # diagonal of the twisting matrix, used by the antipode rule
    weights: tuple[Fraction, ...] | None = None
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.labels and len(self.labels) != len(self.relations):
            raise PresentationError("labels must match relations")
        n = len(self.gens.names)
        for r in self.relations:
            if any((a >> 1) >= n for w in r.words() for a in w):
                raise PresentationError("relation mentions an undeclared generator")

    @property
    def layout(self):
        return self.gens.layout

    def labelled(self, label: str) -> list[Poly]:
        return [r for r, lab in zip(self.relations, self.labels) if lab == label]

    def parse(self, text: str) -> Poly:
        return self.gens.parse(text)

    def format(self, p: Poly) -> str:
        return self.gens.format(p)

    def to_json(self) -> dict:
        lay = self.gens.layout
        return {
            "name": self.name,
            "generators": self.gens.to_json(),
            "layout": None if lay is None else {"rows": lay.rows, "cols": lay.cols, "prefix": lay.prefix},
            "relations": [self.gens.format(r) for r in self.relations],
            "coproduct": self.coproduct,
            "provenance": self.provenance,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False)

    @classmethod
    def from_json(cls, data: Mapping) -> "Presentation":
        names = [g["name"] for g in data["generators"]]
        sa = [g["name"] for g in data["generators"] if g.get("star") == g["name"]]
        layout = None
        if data.get("layout"):
            lay = data["layout"]
            rows, cols, prefix = lay["rows"], lay["cols"], lay["prefix"]
            grid = []
            for i in range(rows):
                row = []
                for j in range(cols):
                    hits = [nm for nm in names if nm.split("_")[0] == prefix and nm.count("_") == 2
                            and _layout_position(nm, names, prefix, rows, cols) == (i, j)]
                    if len(hits) != 1:
                        raise PresentationError("layout does not match generator names")
                    row.append(hits[0])
                grid.append(tuple(row))
            layout = MatrixLayout(rows, cols, prefix, tuple(grid))
        gens = GeneratorSet(names, sa, layout)
        rels = tuple(gens.parse(r) for r in data["relations"])
        return cls(data["name"], gens, rels, coproduct=data.get("coproduct"),
                   provenance=data.get("provenance", ""))


def _layout_position(name, names, prefix, rows, cols):
    # entries are named prefix_a_b; rows/cols follow first appearance order
    row_labels, col_labels = [], []
    for nm in names:
        parts = nm.split("_")
        if len(parts) == 3 and parts[0] == prefix:
            if parts[1] not in row_labels:
                row_labels.append(parts[1])
            if parts[2] not in col_labels:
                col_labels.append(parts[2])
    parts = name.split("_")
    return row_labels.index(parts[1]), col_labels.index(parts[2])


def _square_gens(n, prefix, labels=None, self_adjoint=False):
    layout = MatrixLayout.square(n, prefix, labels)
    names = [nm for _, _, nm in layout.entries()]
    return GeneratorSet(names, names if self_adjoint else (), layout), layout


def _entry(gens, layout, i, j, star=False) -> Poly:
    return gens.gen(layout.names[i][j], star)


def _dedupe(rels, labels):
    seen = set()
    out_r, out_l = [], []
    for r, lab in zip(rels, labels):
        if not r:
            continue
        key = r.monic()
        if key in seen:
            continue
        seen.add(key)
        out_r.append(r)
        out_l.append(lab)
    return tuple(out_r), tuple(out_l)


def _inverse(Q: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(Q)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(Q)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            raise PresentationError("singular matrix Q")
        A[col], A[piv] = A[piv], A[col]
        pv = A[col][col]
        A[col] = [x / pv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


def aut_f(Q, n: int | None = None, prefix: str = "u", labels=None) -> Presentation:
    """A_{u^t}(Q): U^t unitary and U Q^{-1} U* Q = Q^{-1} U* Q U = 1."""
    Q = [[Fraction(x) for x in row] for row in Q]
    n = n or len(Q)
    if len(Q) != n or any(len(row) != n for row in Q):
        raise PresentationError("Q must be n x n")
    Qi = _inverse(Q)
    gens, lay = _square_gens(n, prefix, labels)
    u = [[_entry(gens, lay, i, j) for j in range(n)] for i in range(n)]
    us = [[_entry(gens, lay, i, j, True) for j in range(n)] for i in range(n)]
    rels, labs = [], []
    for i in range(n):
        for j in range(n):
            d = int(i == j)
            # (U^t)*(U^t) and (U^t)(U^t)*
            rels.append(sum((us[i][k] * u[j][k] for k in range(n)), Poly.zero()) - d)
            labs.append("transpose-unitary")
            rels.append(sum((u[k][i] * us[k][j] for k in range(n)), Poly.zero()) - d)
            labs.append("transpose-unitary")
            # U Q^{-1} U* Q
            r = Poly.zero()
            for k in range(n):
                for l in range(n):
                    for m in range(n):
                        c = Qi[k][l] * Q[m][j]
                        if c:
                            r = r + (u[i][k] * us[m][l]).scale(c)
            rels.append(r - d)
            labs.append("twisted-unitary")
            # Q^{-1} U* Q U
            r = Poly.zero()
            for k in range(n):
                for l in range(n):
                    for m in range(n):
                        c = Qi[i][k] * Q[l][m]
                        if c:
                            r = r + (us[l][k] * u[m][j]).scale(c)
            rels.append(r - d)
            labs.append("twisted-unitary")
    rels = [r.monic() for r in rels]
    rels, labs = _dedupe(rels, labs)
    diag = all(Q[i][j] == 0 for i in range(n) for j in range(n) if i != j)
    return Presentation(
        name="autf", gens=gens, relations=rels, labels=labs,
        coproduct=f"Δ({prefix}_ij)=Σ_k {prefix}_ik⊗{prefix}_kj",
        provenance="A_{u^t}(Q): universal unitary quantum group twisted by Q",
        weights=tuple(Q[i][i] for i in range(n)) if diag else None)


def u_n_plus(n: int, prefix: str = "u") -> Presentation:
    p = aut_f([[int(i == j) for j in range(n)] for i in range(n)], n, prefix)
    return replace(p, name="unplus", provenance="U_n^+: U and U^t unitary")


def s_n_plus(n: int, labels=None, prefix: str = "u") -> Presentation:
    """Magic unitary: self-adjoint idempotents, orthogonal along rows and columns, sums 1."""
    if n < 1:
        raise PresentationError("n must be positive")
    labels = [str(x) for x in (labels if labels is not None else range(n))]
    gens, lay = _square_gens(n, prefix, labels, self_adjoint=True)
    u = [[_entry(gens, lay, i, j) for j in range(n)] for i in range(n)]
    rels, labs = [], []
    for i in range(n):
        for j in range(n):
            rels.append(u[i][j] * u[i][j] - u[i][j])
            labs.append("idempotent")
    for i in range(n):
        rels.append(sum(u[i], Poly.zero()) - 1)
        labs.append("sum")
        rels.append(sum((u[k][i] for k in range(n)), Poly.zero()) - 1)
        labs.append("sum")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if j != k:
                    rels.append(u[i][j] * u[i][k])
                    labs.append("orthogonal")
                    rels.append(u[j][i] * u[k][i])
                    labs.append("orthogonal")
    rels, labs = _dedupe(rels, labs)
    return Presentation(name="snplus", gens=gens, relations=rels, labels=labs,
                        coproduct=f"Δ({prefix}_ij)=Σ_k {prefix}_ik⊗{prefix}_kj",
                        provenance="S_n^+: quantum permutation group (magic unitary)")


def banica(g) -> Presentation:
    """Quantum automorphism group of a directed graph without loops or multiple edges."""
    from .graph import adjacency_matrix, classify

    cl = classify(g)
    if cl.has_loop:
        raise PresentationError("graph has a loop; the quantum automorphism group needs a loop-free graph")
    if cl.has_multi_edge:
        raise PresentationError("graph has multiple edges")
    m = g.n_vertices
    base = s_n_plus(m, labels=g.vertices)
    gens, lay = base.gens, base.gens.layout
    D = adjacency_matrix(g)
    u = [[_entry(gens, lay, i, j) for j in range(m)] for i in range(m)]
    rels, labs = list(base.relations), list(base.labels)
    for e in range(g.n_edges):
        s, t = g.source[e], g.target[e]
        for i in range(m):
            for k in range(m):
                if D[i, k]:
                    continue
                for r in (u[s][i] * u[t][k], u[t][k] * u[s][i], u[i][s] * u[k][t], u[k][t] * u[i][s]):
                    rels.append(r)
                    labs.append("adjacency")
    rels, labs = _dedupe(rels, labs)
    return Presentation(name="banica", gens=gens, relations=rels, labels=labs,
                        coproduct="Δ(u_ij)=Σ_k u_ik⊗u_kj",
                        provenance="quantum automorphism group of the directed graph (magic unitary commuting with D)")


def free_circles(n: int, prefix: str = "z") -> Presentation:
    if n < 1:
        raise PresentationError("n must be positive")
    names = [f"{prefix}_{i}" for i in range(1, n + 1)]
    gens = GeneratorSet(names)
    rels, labs = [], []
    for nm in names:
        z, zs = gens.gen(nm), gens.gen(nm, True)
        rels += [zs * z - 1, z * zs - 1]
        labs += ["unitary", "unitary"]
    return Presentation(name="free-circles", gens=gens, relations=tuple(rels), labels=tuple(labs),
                        coproduct=f"Δ({prefix}_i)={prefix}_i⊗{prefix}_i",
                        provenance="free product of n copies of C(S^1)")


def rename_map(P: Presentation, theta: Mapping[str, str]) -> dict[int, Poly]:
    images = {}
    for a in P.gens.letters():
        name = P.gens.names[a >> 1]
        images[a] = P.gens.gen(theta.get(name, name), bool(a & 1))
    return images


def doubling(P: Presentation, theta: Mapping[str, str], caps=None) -> Presentation:
    """Direct sum P ⊕ P presented with two central projections iota_1, iota_2.

    Copy one of generator g is xi_g, copy two is eta_g.
    """
    from .rewrite import Caps, complete

    names = set(P.gens.names)
    if set(theta) - names or set(theta.values()) - names:
        raise PresentationError("theta must map generators to generators")
    full = {g: theta.get(g, g) for g in P.gens.names}
    if sorted(full.values()) != sorted(full):
        raise PresentationError("theta is not a permutation of the generators")
    if any(full[full[g]] != g for g in full):
        raise PresentationError("theta is not involutive (theta^2 != id)")
    if any(P.gens.self_adjoint[P.gens.index[g]] != P.gens.self_adjoint[P.gens.index[full[g]]] for g in full):
        raise PresentationError("theta must respect the involution")
    images = rename_map(P, full)
    system = complete(P.relations, P.gens, caps or Caps(degree=6))
    for r in P.relations:
        if system.reduce(substitute(r, images)):
            raise PresentationError("theta does not preserve the relations")

    copy_names = [("xi_" if k == 0 else "eta_") + g for k in range(2) for g in P.gens.names]
    sa = ["iota_1", "iota_2"] + [("xi_" if k == 0 else "eta_") + g for k in range(2)
                                 for g, s in zip(P.gens.names, P.gens.self_adjoint) if s]
    gens = GeneratorSet(["iota_1", "iota_2"] + copy_names, sa)
    iota = [gens.gen("iota_1"), gens.gen("iota_2")]
    copies = []
    for k, pre in enumerate(("xi_", "eta_")):
        copies.append({a: gens.gen(pre + P.gens.names[a >> 1], bool(a & 1)) for a in P.gens.letters()})
    rels, labs = [], []

    def add(r, lab):
        rels.append(r)
        labs.append(lab)

    add(iota[0] + iota[1] - 1, "unit")
    add(iota[0] * iota[1], "orthogonal")
    add(iota[1] * iota[0], "orthogonal")
    for k in range(2):
        add(iota[k] * iota[k] - iota[k], "projection")
    for k in range(2):
        for x in copies[0].values():
            add(iota[k] * x - x * iota[k], "central")
        for x in copies[1].values():
            add(iota[k] * x - x * iota[k], "central")
    for k in range(2):
        other = 1 - k
        for x in copies[k].values():
            add(x * iota[k] - x, "block")
            add(x * iota[other], "block")
        for r in P.relations:
            # the unit of each copy is its central projection
            img = Poly.zero()
            for w, c in r.items():
                term = iota[k].scale(c)
                for a in w:
                    term = term * copies[k][a]
                img = img + term
            add(img, "copy")
    for x in copies[0].values():
        for y in copies[1].values():
            add(x * y, "cross")
            add(y * x, "cross")
    rels, labs = _dedupe(rels, labs)
    return Presentation(
        name="doubling", gens=gens, relations=rels, labels=labs,
        coproduct="Δ̃∘ξ=(ξ⊗ξ+η⊗[η∘θ])∘Δ; Δ̃∘η=(ξ⊗η+η⊗[ξ∘θ])∘Δ",
        provenance=f"doubling of {P.name} along theta = {dict(sorted(theta.items()))}")


def graph_map_images(source: Presentation, target: Presentation, mapping: Mapping[str, str | Poly]) -> dict[int, Poly]:
    """Letter images for a generator map; values are expressions in the target."""
    images = {}
    for a in source.gens.letters():
        name = source.gens.names[a >> 1]
        img = mapping[name]
        img = target.gens.parse(img) if isinstance(img, str) else img
        images[a] = img.star(target.gens) if a & 1 else img
    return images


def map_relations(source: Presentation, target: Presentation, mapping) -> list[Poly]:
    images = graph_map_images(source, target, mapping)
    return [substitute(r, images) for r in source.relations]


__all__ = ["Presentation", "PresentationError", "aut_f", "u_n_plus", "s_n_plus", "banica",
           "free_circles", "doubling", "map_relations", "graph_map_images", "star_close"]
