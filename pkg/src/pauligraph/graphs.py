"""Simple undirected graphs with vertex weights, products and exact alpha.

Adjacency rows are stored as integer bitsets. Vertices are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

EXACT_SOLVER_LIMIT = 40


class GraphError(ValueError):
    pass


class ExactSolverLimitError(GraphError):
    """Raised when the exact independence solver guard is exceeded."""


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Undirected simple graph with nonnegative vertex weights."""

    __slots__ = ("n", "adj", "weights")

    def __init__(self, n: int, adj: Sequence[int] | None = None,
                 weights: Sequence[float] | None = None):
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        adj = tuple(int(a) for a in (adj if adj is not None else [0] * n))
        if len(adj) != n:
            raise GraphError("adjacency has wrong length")
        full = (1 << n) - 1
        for i, row in enumerate(adj):
            if row & ~full:
                raise GraphError(f"row {i} refers to vertices outside range")
            if (row >> i) & 1:
                raise GraphError(f"self-loop at vertex {i}")
            for j in _bits(row):
                if not (adj[j] >> i) & 1:
                    raise GraphError(f"adjacency not symmetric at ({i}, {j})")
        if weights is None:
            w = (1.0,) * n
        else:
            w = tuple(float(x) for x in weights)
            if len(w) != n:
                raise GraphError("weights have wrong length")
            if any(not np.isfinite(x) or x < 0 for x in w):
                raise GraphError("weights must be finite and nonnegative")
        self.n = n
        self.adj = adj
        self.weights = w

    # -- basic queries -------------------------------------------------

    def has_edge(self, i: int, j: int) -> bool:
        return bool((self.adj[i] >> j) & 1)

    def neighbors(self, i: int) -> list[int]:
        return list(_bits(self.adj[i]))

    def degree(self, i: int) -> int:
        return bin(self.adj[i]).count("1")

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in _bits(self.adj[i]) if i < j]

    @property
    def n_edges(self) -> int:
        return sum(bin(a).count("1") for a in self.adj) // 2

    @property
    def unit_weights(self) -> bool:
        return all(w == 1.0 for w in self.weights)

    def adjacency_matrix(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self.edges():
            m[i, j] = m[j, i] = True
        return m

    def with_weights(self, weights: Sequence[float] | None) -> "Graph":
        return Graph(self.n, self.adj, weights)

    def induced_subgraph(self, vertices: Sequence[int]) -> "Graph":
        """Subgraph on ``vertices``, relabelled in the given order."""
        vertices = list(vertices)
        pos = {v: k for k, v in enumerate(vertices)}
        if len(pos) != len(vertices):
            raise GraphError("repeated vertex in induced_subgraph")
        adj = []
        for v in vertices:
            row = 0
            for u in _bits(self.adj[v]):
                if u in pos:
                    row |= 1 << pos[u]
            adj.append(row)
        return Graph(len(vertices), adj, [self.weights[v] for v in vertices])

    def is_edgeless(self) -> bool:
        return not any(self.adj)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n, self.adj, self.weights) == (other.n, other.adj, other.weights)

    def same_adjacency(self, other: "Graph") -> bool:
        return self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj, self.weights))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        out = {"n": self.n, "edges": [list(e) for e in self.edges()]}
        if not self.unit_weights:
            out["weights"] = list(self.weights)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "Graph":
        try:
            n = int(data["n"])
            edges = data.get("edges", [])
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphError(f"malformed graph object: {exc}") from exc
        return from_edges(n, edges, data.get("weights"))


# -- constructors ---------------------------------------------------------

def from_edges(n: int, edges: Iterable[Sequence[int]],
               weights: Sequence[float] | None = None) -> Graph:
    """Build a graph from an edge list.

    Raises on out-of-range vertices, self-loops and duplicate edges.
    """
    adj = [0] * n
    for e in edges:
        if len(e) != 2:
            raise GraphError(f"edge {e!r} is not a pair")
        i, j = int(e[0]), int(e[1])
        if not (0 <= i < n and 0 <= j < n):
            raise GraphError(f"edge ({i}, {j}) out of range for n={n}")
        if i == j:
            raise GraphError(f"self-loop at vertex {i}")
        if (adj[i] >> j) & 1:
            raise GraphError(f"duplicate edge ({i}, {j})")
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    return Graph(n, adj, weights)


def empty_graph(n: int) -> Graph:
    return Graph(n)


def complete(m: int) -> Graph:
    full = (1 << m) - 1
    return Graph(m, [full & ~(1 << i) for i in range(m)])


def cycle(m: int) -> Graph:
    if m < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return from_edges(m, [(i, (i + 1) % m) for i in range(m)])


def path(m: int) -> Graph:
    return from_edges(m, [(i, i + 1) for i in range(m - 1)])


def star(k: int) -> Graph:
    """``K_{1,k}`` with centre 0."""
    return from_edges(k + 1, [(0, i) for i in range(1, k + 1)])


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, [full & ~a & ~(1 << i) for i, a in enumerate(g.adj)], g.weights)


def anticycle(m: int) -> Graph:
    return complement(cycle(m))


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    adj = list(g1.adj) + [a << g1.n for a in g2.adj]
    return Graph(g1.n + g2.n, adj, g1.weights + g2.weights)


def join(g1: Graph, g2: Graph) -> Graph:
    all1 = (1 << g1.n) - 1
    all2 = ((1 << g2.n) - 1) << g1.n
    adj = [a | all2 for a in g1.adj] + [(a << g1.n) | all1 for a in g2.adj]
    return Graph(g1.n + g2.n, adj, g1.weights + g2.weights)


def lexicographic(g1: Graph, g2: Graph) -> Graph:
    """``G1[G2]``: (i1,j1)~(i2,j2) iff i1~i2, or i1 == i2 and j1~j2.

    Vertex ``(i, j)`` gets index ``i * g2.n + j``; weights multiply.
    """
    n2 = g2.n
    block = (1 << n2) - 1
    adj = []
    for i in range(g1.n):
        outer = 0
        for k in _bits(g1.adj[i]):
            outer |= block << (k * n2)
        for j in range(n2):
            adj.append(outer | (g2.adj[j] << (i * n2)))
    w = [a * b for a in g1.weights for b in g2.weights]
    return Graph(g1.n * n2, adj, w)


def xor_product(g1: Graph, g2: Graph) -> Graph:
    """(i1,j1)~(i2,j2) iff exactly one of i1~i2, j1~j2 holds."""
    n2 = g2.n
    adj = []
    for i1 in range(g1.n):
        for j1 in range(n2):
            row = 0
            for i2 in range(g1.n):
                a = g1.has_edge(i1, i2)
                for j2 in range(n2):
                    if a != g2.has_edge(j1, j2):
                        row |= 1 << (i2 * n2 + j2)
            adj.append(row)
    w = [a * b for a in g1.weights for b in g2.weights]
    return Graph(g1.n * n2, adj, w)


# -- structure -----------------------------------------------------------

def connected_components(g: Graph) -> list[list[int]]:
    seen = 0
    comps = []
    for s in range(g.n):
        if (seen >> s) & 1:
            continue
        comp = 1 << s
        frontier = comp
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= g.adj[v]
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        comps.append(list(_bits(comp)))
    return comps


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1


def is_cycle(g: Graph) -> bool:
    return g.n >= 3 and is_connected(g) and all(g.degree(i) == 2 for i in range(g.n))


@dataclass(frozen=True)
class InducedPartition:
    """Vertex classes around a chosen edge ``(i0, j0)``.

    ``v1`` is adjacent to ``j0`` only, ``v2`` to both endpoints and ``v3``
    to ``i0`` only; ``v0`` to neither.
    """

    i0: int
    j0: int
    v0: tuple[int, ...]
    v1: tuple[int, ...]
    v2: tuple[int, ...]
    v3: tuple[int, ...]
    vertices: tuple[int, ...] = field(default=())

    def class_of(self, v: int) -> int:
        for k, group in enumerate((self.v0, self.v1, self.v2, self.v3)):
            if v in group:
                return k
        raise KeyError(v)


def pauli_induced_subgraph(g: Graph, edge: tuple[int, int]) -> tuple[Graph, InducedPartition]:
    """Pauli-(i0, j0)-induced subgraph.

    The result lives on every vertex except ``i0`` and ``j0``, in increasing
    order (``partition.vertices`` maps new index to old). Adjacency is
    complemented exactly for pairs drawn from two different classes among
    ``v1``, ``v2``, ``v3``.
    """
    i0, j0 = edge
    if not (0 <= i0 < g.n and 0 <= j0 < g.n) or not g.has_edge(i0, j0):
        raise GraphError(f"({i0}, {j0}) is not an edge")
    rest = [v for v in range(g.n) if v not in (i0, j0)]
    cls = {}
    groups: list[list[int]] = [[], [], [], []]
    for v in rest:
        a, b = g.has_edge(v, i0), g.has_edge(v, j0)
        k = {(False, False): 0, (False, True): 1, (True, True): 2, (True, False): 3}[(a, b)]
        cls[v] = k
        groups[k].append(v)
    pos = {v: k for k, v in enumerate(rest)}
    adj = [0] * len(rest)
    for u in rest:
        for v in rest:
            if u == v:
                continue
            e = g.has_edge(u, v)
            if cls[u] and cls[v] and cls[u] != cls[v]:
                e = not e
            if e:
                adj[pos[u]] |= 1 << pos[v]
    part = InducedPartition(i0, j0, *(tuple(x) for x in groups), vertices=tuple(rest))
    return Graph(len(rest), adj, [g.weights[v] for v in rest]), part


# -- exact independence number ------------------------------------------

def weighted_independence(g: Graph, weights: Sequence[float] | None = None,
                          limit: int = EXACT_SOLVER_LIMIT) -> tuple[float, list[int]]:
    """Maximum weight independent set by branch and bound.

    Branching follows descending degree (ties by index). The bound at each
    node is a greedy clique cover of the candidate set: an independent set
    uses at most one vertex per clique.

    Returns
    -------
    (value, witness)
        ``witness`` is a sorted list of vertices attaining ``value``.
    """
    if g.n > limit:
        raise ExactSolverLimitError(
            f"exact solver limit: {g.n} vertices > {limit}")
    w = list(g.weights if weights is None else (float(x) for x in weights))
    if len(w) != g.n or any(x < 0 for x in w):
        raise GraphError("weights must be nonnegative and match the vertex count")
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    adj = g.adj
    best_val = 0.0
    best_set = 0

    def cover_bound(cand: int) -> float:
        cliques: list[list] = []  # [members mask, max weight]
        for v in order:
            if not (cand >> v) & 1:
                continue
            for c in cliques:
                if c[0] & ~adj[v] == 0:
                    c[0] |= 1 << v
                    if w[v] > c[1]:
                        c[1] = w[v]
                    break
            else:
                cliques.append([1 << v, w[v]])
        return sum(c[1] for c in cliques)

    def expand(cand: int, val: float, chosen: int) -> None:
        nonlocal best_val, best_set
        if val > best_val:
            best_val, best_set = val, chosen
        if not cand or val + cover_bound(cand) <= best_val:
            return
        v = next(u for u in order if (cand >> u) & 1)
        bit = 1 << v
        if w[v] > 0:
            expand(cand & ~adj[v] & ~bit, val + w[v], chosen | bit)
        expand(cand & ~bit, val, chosen)

    expand((1 << g.n) - 1, 0.0, 0)
    return best_val, sorted(_bits(best_set))


def independence_number(g: Graph, limit: int = EXACT_SOLVER_LIMIT) -> int:
    value, _ = weighted_independence(g, [1.0] * g.n, limit=limit)
    return int(round(value))


def maximum_independent_set(g: Graph, limit: int = EXACT_SOLVER_LIMIT) -> list[int]:
    return weighted_independence(g, [1.0] * g.n, limit=limit)[1]


def is_independent(g: Graph, vertices: Iterable[int]) -> bool:
    vs = list(vertices)
    return all(not g.has_edge(a, b) for k, a in enumerate(vs) for b in vs[k + 1:])
