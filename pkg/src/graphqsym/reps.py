"""Finite-dimensional matrix representations of presentations.

A representation assigns a d x d matrix to each generator; the adjoint of a
generator is always the conjugate transpose, so star-compatibility holds by
construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.stats import unitary_group

from .ncpoly import GeneratorSet, Poly

DEFAULT_TOLERANCE = 1e-9
WITNESS_THRESHOLD = 0.1

FAMILIES = ("k2-doubling", "path-diagonal", "cuntz-classical", "banica-classical", "graph-pathspace")


class RepError(ValueError):
    pass


class MatrixRep:
    def __init__(self, dim: int, matrices: dict, tolerance: float = DEFAULT_TOLERANCE, seed=None,
                 family: str | None = None):
        self.dim = int(dim)
        self.tolerance = tolerance
        self.seed = seed
        self.family = family
        self.matrices = {}
        for name, M in matrices.items():
            M = np.asarray(M)
            if M.shape != (self.dim, self.dim):
                raise RepError(f"matrix for {name} has shape {M.shape}, expected {(self.dim, self.dim)}")
            self.matrices[name] = M
        self.dtype = np.result_type(*self.matrices.values()) if self.matrices else np.dtype(complex)

    def __repr__(self):
        return f"MatrixRep(dim={self.dim}, generators={sorted(self.matrices)}, seed={self.seed})"

    def letter_matrix(self, gens: GeneratorSet, a: int) -> np.ndarray:
        name = gens.names[a >> 1]
        if name not in self.matrices:
            raise RepError(f"representation does not cover generator {name}")
        M = self.matrices[name]
        return M.conj().T if a & 1 else M

    def evaluate(self, p: Poly, gens: GeneratorSet) -> np.ndarray:
        """Image of p; the empty word goes to the identity."""
        dtype = np.result_type(self.dtype, float)
        out = np.zeros((self.dim, self.dim), dtype=dtype)
        cache: dict[bytes, np.ndarray] = {b"": np.eye(self.dim, dtype=dtype)}
        letters = {}
        for w, c in p.items():
            # share prefixes between words
            k = len(w)
            while w[:k] not in cache:
                k -= 1
            M = cache[w[:k]]
            for i in range(k, len(w)):
                a = w[i]
                if a not in letters:
                    letters[a] = self.letter_matrix(gens, a)
                M = M @ letters[a]
                cache[w[:i + 1]] = M
            out = out + float(c) * M
        return out

    def covers(self, gens: GeneratorSet) -> bool:
        return all(n in self.matrices for n in gens.names)

    def to_json(self) -> dict:
        return {"dim": self.dim, "tolerance": self.tolerance,
                "matrices": {name: [[{"re": float(np.real(x)), "im": float(np.imag(x))} for x in row]
                                    for row in M] for name, M in self.matrices.items()}}

    @classmethod
    def from_json(cls, data: dict) -> "MatrixRep":
        mats = {name: np.array([[complex(x["re"], x["im"]) for x in row] for row in rows])
                for name, rows in data["matrices"].items()}
        return cls(data["dim"], mats, data.get("tolerance", DEFAULT_TOLERANCE))


def spectral_norm(M: np.ndarray) -> float:
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M.astype(complex), 2))


@dataclass
class RepReport:
    per_relation: list[tuple[str, float]]
    tolerance: float
    seed: object = None

    @property
    def max_residual(self) -> float:
        return max((r for _, r in self.per_relation), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tolerance

    def to_json(self) -> dict:
        return {"max_residual": self.max_residual, "pass": self.passed,
                "per_relation": [{"relation": r, "residual": x} for r, x in self.per_relation],
                "seed": self.seed}


def verify_rep(P, rep: MatrixRep, relations=None) -> RepReport:
    gens = P.gens
    missing = [n for n in gens.names if n not in rep.matrices]
    if missing:
        raise RepError(f"representation does not cover generators {missing}")
    rels = P.relations if relations is None else relations
    rows = [(gens.format(r), spectral_norm(rep.evaluate(r, gens))) for r in rels]
    return RepReport(rows, rep.tolerance, rep.seed)


def residual(P, rep: MatrixRep, p: Poly) -> float:
    return spectral_norm(rep.evaluate(p, P.gens))


# ---------------------------------------------------------------------------
# built-in families

def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    if d == 1:
        return np.exp(2j * np.pi * rng.random()).reshape(1, 1)
    return unitary_group.rvs(d, random_state=rng)


def _block(A, B):
    d = A.shape[0]
    Z = np.zeros((2 * d, 2 * d), dtype=complex)
    Z[:d, :d] = A
    Z[d:, d:] = B
    return Z


def _k2_doubling(d, rng):
    Z1, Z2 = haar_unitary(d, rng), haar_unitary(d, rng)
    zero = np.zeros((d, d), dtype=complex)
    eye = np.eye(d, dtype=complex)
    mats = {
        "q_1_1": _block(Z1, zero), "q_1_2": _block(zero, Z1),
        "q_2_1": _block(zero, Z2), "q_2_2": _block(Z2, zero),
        "iota_1": _block(eye, zero), "iota_2": _block(zero, eye),
        "xi_z_1": _block(Z1, zero), "xi_z_2": _block(Z2, zero),
        "eta_z_1": _block(zero, Z1), "eta_z_2": _block(zero, Z2),
    }
    return 2 * d, mats


def _path_diagonal(n, d, rng):
    mats = {}
    zero = np.zeros((d, d), dtype=complex)
    for i in range(1, n + 1):
        U = haar_unitary(d, rng)
        mats[f"z_{i}"] = U
        for j in range(1, n + 1):
            mats[f"q_{i}_{j}"] = U if i == j else zero
    return d, mats


def _cuntz_classical(n, rng):
    U = haar_unitary(n, rng)
    mats = {}
    for i in range(n):
        for j in range(n):
            x = np.array([[U[i, j]]])
            mats[f"q_{i + 1}_{j + 1}"] = x
            mats[f"u_{i + 1}_{j + 1}"] = x
    return 1, mats


def _banica_classical(graph, sigma):
    from .graph import VertexPermutation, classical_automorphisms

    if sigma is None:
        sigma = VertexPermutation.identity(graph.n_vertices)
    elif isinstance(sigma, int):
        sigma = classical_automorphisms(graph)[sigma]
    mats = {}
    for i, v in enumerate(graph.vertices):
        for j, w in enumerate(graph.vertices):
            mats[f"u_{v}_{w}"] = np.array([[1.0 if sigma(j) == i else 0.0]])
    return 1, mats


def builtin_rep(name: str, params: dict | None = None, seed: int = 0,
                tolerance: float = DEFAULT_TOLERANCE) -> MatrixRep:
    """Seeded representation from one of the registered families.

    params: ``d`` (block dimension), ``n`` (matrix size), ``graph``, ``sigma``.
    """
    params = dict(params or {})
    rng = np.random.default_rng(seed)
    if name == "k2-doubling":
        if params.get("n", 2) != 2:
            raise RepError("k2-doubling needs a 2 x 2 generator matrix")
        dim, mats = _k2_doubling(params.get("d", 3), rng)
    elif name == "path-diagonal":
        n = params.get("n") or (params["graph"].n_edges if "graph" in params else None)
        if n is None:
            raise RepError("path-diagonal needs n or graph")
        dim, mats = _path_diagonal(n, params.get("d", 3), rng)
    elif name == "cuntz-classical":
        if "n" not in params:
            raise RepError("cuntz-classical needs n")
        dim, mats = _cuntz_classical(params["n"], rng)
    elif name == "banica-classical":
        if "graph" not in params:
            raise RepError("banica-classical needs a graph")
        dim, mats = _banica_classical(params["graph"], params.get("sigma"))
    elif name == "graph-pathspace":
        from .cstar import path_space_rep

        if "graph" not in params:
            raise RepError("graph-pathspace needs a graph")
        rep = path_space_rep(params["graph"])
        rep.family, rep.tolerance = name, tolerance
        return rep
    else:
        raise RepError(f"unknown representation family {name!r}")
    return MatrixRep(dim, mats, tolerance, seed, family=name)


def applicable_reps(P, d: int = 3, seed: int = 0, graph=None) -> list[MatrixRep]:
    """Sampled members of every built-in family that cover P and pass its relations."""
    params = {"d": d}
    if P.gens.layout is not None:
        params["n"] = P.gens.layout.rows
    if graph is not None:
        params["graph"] = graph
    out = []
    for fam in FAMILIES:
        try:
            rep = builtin_rep(fam, params, seed)
        except Exception:
            continue
        if rep.covers(P.gens) and verify_rep(P, rep).passed:
            out.append(rep)
    return out


@dataclass
class Witness:
    a: str
    b: str
    norm: float
    seed: int
    family: str | None = None

    def to_json(self) -> dict:
        return {"pair": [self.a, self.b], "norm": self.norm, "seed": self.seed, "family": self.family}


def _commutator_pairs(gens: GeneratorSet):
    """Pairs of distinct generators, then pairs involving an adjoint."""
    letters = gens.letters()
    plain = [a for a in letters if not a & 1]
    yield list(itertools.combinations(plain, 2))
    yield [(a, b) for a, b in itertools.combinations(letters, 2) if (a & 1 or b & 1)]


def witness_noncommutativity(P, d: int = 2, seed: int = 0, trials: int = 10, family: str | None = None,
                             graph=None, threshold: float = WITNESS_THRESHOLD) -> Witness | None:
    """Search sampled representations for two generators with a large commutator."""
    fams = [family] if family else list(FAMILIES)
    for t in range(trials):
        s = seed + t
        params = {"d": d}
        if P.gens.layout is not None:
            params["n"] = P.gens.layout.rows
        if graph is not None:
            params["graph"] = graph
        for fam in fams:
            try:
                rep = builtin_rep(fam, params, s)
            except Exception:
                continue
            if not rep.covers(P.gens) or not verify_rep(P, rep).passed:
                continue
            best = None
            for group in _commutator_pairs(P.gens):
                for a, b in group:
                    A, B = rep.letter_matrix(P.gens, a), rep.letter_matrix(P.gens, b)
                    x = spectral_norm(A @ B - B @ A)
                    if x > threshold and (best is None or x > best[2]):
                        best = (a, b, x)
                if best is not None:
                    break
            if best is not None:
                a, b, x = best
                return Witness(P.gens.letter_name(a), P.gens.letter_name(b), x, s, fam)
    return None
