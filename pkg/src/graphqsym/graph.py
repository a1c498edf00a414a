"""Finite directed graphs: parsing, classification, adjacency and automorphisms.

Vertices and edges keep their declaration order; every matrix index used
elsewhere in the package refers to that order.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

_ID = re.compile(r"[A-Za-z0-9_]+\Z")


class GraphError(ValueError):
    """Invalid graph data (bad syntax, duplicate ids, not connected, ...)."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]  # (edge id, source id, target id)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex id")
        ids = [e[0] for e in self.edges]
        if len(set(ids)) != len(ids):
            raise GraphError("duplicate edge id")
        if not self.edges:
            raise GraphError("empty edge set")
        known = set(self.vertices)
        for eid, s, t in self.edges:
            for x in (eid, s, t):
                if not _ID.match(x):
                    raise GraphError(f"invalid id {x!r}")
            if s not in known or t not in known:
                raise GraphError(f"edge {eid} has a dangling endpoint")
        touched = {s for _, s, _ in self.edges} | {t for _, _, t in self.edges}
        isolated = [v for v in self.vertices if v not in touched]
        if isolated:
            raise GraphError(f"not connected: vertex {isolated[0]} is neither a source nor a target")

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_index(self) -> dict[str, int]:
        return {e[0]: i for i, e in enumerate(self.edges)}

    @cached_property
    def source(self) -> tuple[int, ...]:
        return tuple(self.vertex_index[s] for _, s, _ in self.edges)

    @cached_property
    def target(self) -> tuple[int, ...]:
        return tuple(self.vertex_index[t] for _, _, t in self.edges)

    @cached_property
    def out_edges(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(i for i in range(self.n_edges) if self.source[i] == v)
                     for v in range(self.n_vertices))

    @cached_property
    def in_edges(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(i for i in range(self.n_edges) if self.target[i] == v)
                     for v in range(self.n_vertices))

    def is_sink(self, v: int) -> bool:
        return not self.out_edges[v]

    @cached_property
    def sink_indices(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n_vertices) if self.is_sink(v))

    def edge_name(self, i: int) -> str:
        return self.edges[i][0]


@dataclass(frozen=True)
class GraphClassification:
    has_loop: bool
    has_multi_edge: bool
    sinks: frozenset[str]
    sources_only: frozenset[str]
    acyclic: bool


@dataclass(frozen=True)
class VertexPermutation:
    """A bijection of vertex indices, stored as its image tuple."""

    image: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.image) != list(range(len(self.image))):
            raise ValueError("not a permutation")

    def __call__(self, i: int) -> int:
        return self.image[i]

    def compose(self, other: "VertexPermutation") -> "VertexPermutation":
        """Return self ∘ other (apply `other` first)."""
        return VertexPermutation(tuple(self.image[j] for j in other.image))

    def inverse(self) -> "VertexPermutation":
        inv = [0] * len(self.image)
        for i, j in enumerate(self.image):
            inv[j] = i
        return VertexPermutation(tuple(inv))

    @classmethod
    def identity(cls, n: int) -> "VertexPermutation":
        return cls(tuple(range(n)))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.image))


def parse_graph(text: str) -> Graph:
    vertices: list[str] = []
    seen: set[str] = set()
    edges: list[tuple[str, str, str]] = []
    edge_ids: set[str] = set()

    def declare(v):
        if v not in seen:
            seen.add(v)
            vertices.append(v)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        # column tracking for error messages
        tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]
        keyword, col = tokens[0]
        for tok, c in tokens[1:]:
            if not _ID.match(tok):
                raise GraphError(f"invalid id {tok!r}", lineno, c)
        if keyword == "vertex":
            if len(tokens) != 2:
                raise GraphError("expected: vertex <id>", lineno, col)
            v = tokens[1][0]
            if v in seen:
                raise GraphError(f"duplicate vertex id {v!r}", lineno, tokens[1][1])
            declare(v)
        elif keyword == "edge":
            if len(tokens) != 4:
                raise GraphError("expected: edge <id> <source> <target>", lineno, col)
            eid, s, t = (tok for tok, _ in tokens[1:])
            if eid in edge_ids:
                raise GraphError(f"duplicate edge id {eid!r}", lineno, tokens[1][1])
            edge_ids.add(eid)
            declare(s)
            declare(t)
            edges.append((eid, s, t))
        else:
            raise GraphError(f"unknown declaration {keyword!r}", lineno, col)
    return Graph(tuple(vertices), tuple(edges))


def load_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def serialize_graph(g: Graph) -> str:
    lines = [f"vertex {v}" for v in g.vertices]
    lines += [f"edge {e} {s} {t}" for e, s, t in g.edges]
    return "\n".join(lines) + "\n"


def _has_cycle(g: Graph) -> bool:
    WHITE, GREY, BLACK = 0, 1, 2
    colour = [WHITE] * g.n_vertices
    for root in range(g.n_vertices):
        if colour[root] != WHITE:
            continue
        colour[root] = GREY
        stack = [(root, iter(g.out_edges[root]))]
        while stack:
            v, it = stack[-1]
            e = next(it, None)
            if e is None:
                colour[v] = BLACK
                stack.pop()
                continue
            w = g.target[e]
            if colour[w] == GREY:
                return True
            if colour[w] == WHITE:
                colour[w] = GREY
                stack.append((w, iter(g.out_edges[w])))
    return False


def classify(g: Graph) -> GraphClassification:
    pairs = list(zip(g.source, g.target))
    return GraphClassification(
        has_loop=any(s == t for s, t in pairs),
        has_multi_edge=len(set(pairs)) != len(pairs),
        sinks=frozenset(g.vertices[v] for v in range(g.n_vertices) if not g.out_edges[v]),
        sources_only=frozenset(g.vertices[v] for v in range(g.n_vertices) if not g.in_edges[v]),
        acyclic=not _has_cycle(g),
    )


def adjacency_matrix(g: Graph) -> np.ndarray:
    D = np.zeros((g.n_vertices, g.n_vertices), dtype=np.int64)
    for s, t in zip(g.source, g.target):
        D[s, t] += 1
    return D


def classical_automorphisms(g: Graph, cap: int = 10) -> list[VertexPermutation]:
    """All vertex permutations σ with D[σ(i), σ(j)] == D[i, j].

    Exhaustive backtracking over partial assignments; raises when the vertex
    count exceeds `cap`.
    """
    m = g.n_vertices
    if m > cap:
        raise ValueError(f"graph with {m} vertices is too large for brute force (cap {cap})")
    D = adjacency_matrix(g).tolist()
    found = []
    image = [-1] * m
    used = [False] * m

    def extend(i):
        if i == m:
            found.append(VertexPermutation(tuple(image)))
            return
        for c in range(m):
            if used[c]:
                continue
            if D[c][c] != D[i][i]:
                continue
            if any(D[image[j]][c] != D[j][i] or D[c][image[j]] != D[i][j] for j in range(i)):
                continue
            image[i] = c
            used[c] = True
            extend(i + 1)
            used[c] = False
        image[i] = -1

    extend(0)
    return found


def induced_edge_map(g: Graph, sigma: VertexPermutation) -> dict[int, int] | None:
    """Match edges bijectively along σ, respecting multiplicities."""
    buckets: dict[tuple[int, int], list[int]] = {}
    for i, st in enumerate(zip(g.source, g.target)):
        buckets.setdefault(st, []).append(i)
    mapping = {}
    for (s, t), es in buckets.items():
        targets = buckets.get((sigma(s), sigma(t)), [])
        if len(targets) != len(es):
            return None
        mapping.update(zip(es, targets))
    return mapping


# ---------------------------------------------------------------------------
# named families used throughout the tests and scripts

def path_graph(n: int) -> Graph:
    """P_n: v0 -> v1 -> ... -> vn with edges e1..en."""
    return Graph(tuple(f"v{i}" for i in range(n + 1)),
                 tuple((f"e{i}", f"v{i - 1}", f"v{i}") for i in range(1, n + 1)))


def cycle_graph(n: int) -> Graph:
    return Graph(tuple(f"v{i}" for i in range(n)),
                 tuple((f"e{i + 1}", f"v{i}", f"v{(i + 1) % n}") for i in range(n)))


def complete_graph_k2() -> Graph:
    """The complete directed graph on two vertices: e1: a -> b, e2: b -> a."""
    return Graph(("a", "b"), (("e1", "a", "b"), ("e2", "b", "a")))


def cuntz_graph(n: int) -> Graph:
    """L_n: a single vertex carrying n loops (graph of the Cuntz algebra O_n)."""
    return Graph(("v",), tuple((f"e{i}", "v", "v") for i in range(1, n + 1)))


SAMPLE_GRAPHS = {
    "P1": lambda: path_graph(1),
    "P2": lambda: path_graph(2),
    "P3": lambda: path_graph(3),
    "K2": complete_graph_k2,
    "L1": lambda: cuntz_graph(1),
    "L2": lambda: cuntz_graph(2),
    "L3": lambda: cuntz_graph(3),
    "C4": lambda: cycle_graph(4),
}


def sample_graph(name: str) -> Graph:
    return SAMPLE_GRAPHS[name]()


def random_graph(seed: int, max_edges: int = 6, max_vertices: int = 5,
                 allow_loops: bool = True, allow_multi: bool = True) -> Graph:
    """A random graph that is connected in the no-isolated-vertex sense."""
    rng = random.Random(seed)
    m = rng.randint(1, max_vertices)
    n = rng.randint(max(1, (m + 1) // 2), max_edges)
    pairs: list[tuple[int, int]] = []
    candidates = [(s, t) for s, t in product(range(m), repeat=2) if allow_loops or s != t]
    if not candidates:
        m, candidates = 2, [(0, 1), (1, 0)]
    while len(pairs) < n:
        s, t = rng.choice(candidates)
        if not allow_multi and (s, t) in pairs:
            if len(set(candidates) - set(pairs)) == 0:
                break
            continue
        pairs.append((s, t))
    touched = sorted({v for p in pairs for v in p})
    names = {v: f"v{k}" for k, v in enumerate(touched)}
    return Graph(tuple(names[v] for v in touched),
                 tuple((f"e{i + 1}", names[s], names[t]) for i, (s, t) in enumerate(pairs)))
