"""Operator representations of graphs.

Constructions of self-adjoint unitary representations (edge anticommutes,
non-edge commutes) from a graph, their verification, and a few gadgets used
as lower-bound witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import graphs as gr
from .graphs import Graph
from .pauli import (
    PauliString,
    anticommutes,
    anticommuting_family,
    commutes,
    to_matrix,
)

SIGMA = (
    PauliString(1, 0, 0),  # identity
    PauliString(1, 1, 0),  # X
    PauliString(1, 1, 1),  # Y
    PauliString(1, 0, 1),  # Z
)
KINDS = ("SAUR", "SAURA", "SAR", "SARA")


def frustration_graph(strings: Sequence[PauliString],
                      weights: Sequence[float] | None = None) -> Graph:
    """Graph with an edge exactly where two strings anticommute."""
    strings = list(strings)
    n = len(strings)
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if anticommutes(strings[i], strings[j]):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return Graph(n, adj, weights)


def anticommutation_graph(ops: Sequence[np.ndarray], atol: float = 1e-9) -> Graph:
    """Edge where ``{A_i, A_j} = 0`` numerically (matrix inputs)."""
    ops = [np.asarray(a) for a in ops]
    n = len(ops)
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            ac = ops[i] @ ops[j] + ops[j] @ ops[i]
            if np.max(np.abs(ac), initial=0.0) <= atol:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return Graph(n, adj)


# -- standard SAUR ----------------------------------------------------------

def _standard(g: Graph, labels: list[int], sequence: list[tuple[int, int]]) -> list[PauliString]:
    edges = g.edges()
    if not edges:
        return [PauliString(0)] * g.n
    pos = {lab: k for k, lab in enumerate(labels)}
    if sequence:
        a, b = sequence.pop(0)
        if a not in pos or b not in pos or not g.has_edge(pos[a], pos[b]):
            raise gr.GraphError(f"edge ({a}, {b}) is not present at this step")
        i0, j0 = pos[a], pos[b]
    else:
        i0, j0 = edges[0]
    sub, part = gr.pauli_induced_subgraph(g, (i0, j0))
    inner = _standard(sub, [labels[v] for v in part.vertices], sequence)
    m = inner[0].n_qubits if inner else 0
    ident = PauliString(m)
    out: list[PauliString | None] = [None] * g.n
    out[i0] = SIGMA[1].tensor(ident)
    out[j0] = SIGMA[3].tensor(ident)
    for k, v in enumerate(part.vertices):
        out[v] = SIGMA[part.class_of(v)].tensor(inner[k])
    return out  # type: ignore[return-value]


def standard_saur(g: Graph, edge_sequence: Sequence[tuple[int, int]] | None = None
                  ) -> list[PauliString]:
    """Recursive standard SAUR of ``g``.

    At each step an edge ``(i0, j0)`` is removed: ``i0`` receives ``X ⊗ 1``,
    ``j0`` receives ``Z ⊗ 1`` and every other vertex ``sigma_k ⊗ S'`` with
    ``S'`` from the Pauli-induced subgraph and ``k`` its class
    (1, X, Y, Z for classes 0..3). Edges of ``edge_sequence`` are consumed
    first, in original vertex labels; afterwards the lexicographically
    smallest remaining edge is used. One qubit is prepended per step.
    """
    seq = [tuple(e) for e in (edge_sequence or [])]
    out = _standard(g, list(range(g.n)), seq)
    if seq:
        raise gr.GraphError(f"unused edges left in sequence: {seq}")
    return out


def edge_saur(g: Graph, orientation: Sequence[tuple[int, int]] | None = None
              ) -> list[PauliString]:
    """One qubit per edge; X at the edge's tail vertex, Z at its head.

    Qubits follow the sorted undirected edge list. The default orientation
    points from the smaller to the larger vertex.
    """
    edges = g.edges()
    if orientation is None:
        directed = edges
    else:
        directed = [tuple(e) for e in orientation]
        if sorted(tuple(sorted(e)) for e in directed) != edges:
            raise gr.GraphError("orientation must cover each edge exactly once")
        lookup = {tuple(sorted(e)): e for e in directed}
        directed = [lookup[e] for e in edges]
    m = len(edges)
    x = [0] * g.n
    z = [0] * g.n
    for q, (tail, head) in enumerate(directed):
        bit = 1 << (m - 1 - q)
        x[tail] |= bit
        z[head] |= bit
    return [PauliString(m, x[i], z[i]) for i in range(g.n)]


def complete_saur(g: Graph, edge_sequence: Sequence[tuple[int, int]] | None = None
                  ) -> list[PauliString]:
    """Standard SAUR with an auxiliary Z on a private qubit per vertex."""
    base = standard_saur(g, edge_sequence)
    n = g.n
    return [s.tensor(PauliString(n, 0, 1 << (n - 1 - i))) for i, s in enumerate(base)]


# -- verification -------------------------------------------------------

@dataclass
class RepresentationReport:
    kind: str
    passed: bool
    violations: list[dict] = field(default_factory=list)
    problems: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"pass": self.passed, "kind": self.kind,
                "violations": self.violations, "problems": self.problems}

    def __bool__(self) -> bool:
        return self.passed


def _relation(a, b, atol: float) -> str:
    if isinstance(a, PauliString):
        return "anticommute" if anticommutes(a, b) else "commute"
    ab, ba = a @ b, b @ a
    if np.max(np.abs(ab + ba), initial=0.0) <= atol:
        return "anticommute"
    if np.max(np.abs(ab - ba), initial=0.0) <= atol:
        return "commute"
    return "neither"


def verify_representation(ops, g: Graph, kind: str = "SAUR",
                          atol: float = 1e-9) -> RepresentationReport:
    """Check Hermiticity, unitarity (or ``A^2 <= 1``) and the relation pattern.

    Pauli strings are checked symbolically; matrices numerically.
    """
    kind = kind.upper()
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    ops = list(ops)
    report = RepresentationReport(kind, True)
    if len(ops) != g.n:
        report.passed = False
        report.problems.append(f"{len(ops)} operators for {g.n} vertices")
        return report
    symbolic = all(isinstance(o, PauliString) for o in ops)
    if symbolic:
        if len({o.n_qubits for o in ops}) > 1:
            raise ValueError("strings act on different numbers of qubits")
    else:
        ops = [to_matrix(o) if isinstance(o, PauliString) else np.asarray(o, dtype=complex)
               for o in ops]
        shapes = {o.shape for o in ops}
        if len(shapes) > 1 or any(len(s) != 2 or s[0] != s[1] for s in shapes):
            raise ValueError("operators must be square and of equal dimension")
        for i, a in enumerate(ops):
            if np.max(np.abs(a - a.conj().T), initial=0.0) > atol:
                report.problems.append(f"operator {i} is not Hermitian")
            sq = a @ a
            if kind in ("SAUR", "SAURA"):
                if np.max(np.abs(sq - np.eye(len(a))), initial=0.0) > atol:
                    report.problems.append(f"operator {i} does not square to identity")
            elif np.linalg.eigvalsh((sq + sq.conj().T) / 2).max(initial=0.0) > 1 + atol:
                report.problems.append(f"operator {i} violates A^2 <= 1")
    need_commute = kind in ("SAUR", "SAR")
    for i in range(g.n):
        for j in range(i + 1, g.n):
            rel = _relation(ops[i], ops[j], atol)
            if g.has_edge(i, j):
                if rel != "anticommute":
                    report.violations.append(
                        {"i": i, "j": j, "expected": "anticommute", "found": rel})
            elif need_commute and rel != "commute":
                report.violations.append(
                    {"i": i, "j": j, "expected": "commute", "found": rel})
    report.passed = not report.violations and not report.problems
    return report


# -- orthogonal representations --------------------------------------------

@dataclass
class OrthogonalRepresentation:
    """Unit vectors (rows of ``vectors``) and a unit handle vector."""

    vectors: np.ndarray
    handle: np.ndarray
    atol: float = 1e-10

    def __post_init__(self):
        self.vectors = np.atleast_2d(np.asarray(self.vectors, dtype=float))
        self.handle = np.asarray(self.handle, dtype=float)
        norms = np.linalg.norm(self.vectors, axis=1)
        if np.any(np.abs(norms - 1) > self.atol):
            raise ValueError("orthogonal representation vectors must be unit")
        if abs(np.linalg.norm(self.handle) - 1) > self.atol:
            raise ValueError("handle must be a unit vector")
        if self.handle.shape != (self.vectors.shape[1],):
            raise ValueError("handle dimension differs from vector dimension")

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def is_orthogonal_for(self, g: Graph, atol: float = 1e-10) -> bool:
        gram = self.vectors @ self.vectors.T
        return all(abs(gram[i, j]) <= atol for i, j in g.edges())

    def value(self, weights: Sequence[float] | None = None) -> float:
        """``sum_i w_i <v_i|u>^2``."""
        overlaps = self.vectors @ self.handle
        w = np.ones(len(overlaps)) if weights is None else np.asarray(weights, float)
        return float(w @ overlaps**2)


def pentagon_or() -> OrthogonalRepresentation:
    """Umbrella representation of C5.

    Vertex ``i`` is orthogonal to ``i +- 2 (mod 5)``, i.e. the pentagon with
    edges {02, 24, 41, 13, 30}.
    """
    tau = 5 ** -0.25
    taup = np.sqrt(1 - tau**2)
    ang = 2 * np.pi * np.arange(1, 6) / 5
    vecs = np.column_stack([np.full(5, tau), taup * np.cos(ang), taup * np.sin(ang)])
    return OrthogonalRepresentation(vecs, np.array([1.0, 0.0, 0.0]))


def saura_from_or(rep: OrthogonalRepresentation) -> list[np.ndarray]:
    """``S_i = sum_k v_ik A_k`` over a pairwise anticommuting family."""
    family = [to_matrix(p) for p in anticommuting_family(rep.dim)]
    stack = np.array(family)
    return [np.tensordot(v, stack, axes=1) for v in rep.vectors]


# -- witness states -----------------------------------------------------

def independent_set_state(strings, independent_set: Sequence[int],
                          atol: float = 1e-9) -> np.ndarray:
    """Joint eigenvector of the listed pairwise commuting operators.

    The +1 eigenspace is preferred at each step; -1 is used when the +1
    intersection is empty.
    """
    ops = [strings[i] for i in independent_set]
    for a in range(len(ops)):
        for b in range(a + 1, len(ops)):
            p, q = ops[a], ops[b]
            ok = commutes(p, q) if isinstance(p, PauliString) else (
                np.max(np.abs(p @ q - q @ p), initial=0.0) <= atol)
            if not ok:
                raise ValueError(
                    f"operators {independent_set[a]} and {independent_set[b]} do not commute")
    mats = [to_matrix(o) if isinstance(o, PauliString) else np.asarray(o, dtype=complex)
            for o in ops]
    if mats:
        dim = mats[0].shape[0]
    else:
        first = strings[0]
        dim = (1 << first.n_qubits) if isinstance(first, PauliString) else len(first)
    basis = np.eye(dim, dtype=complex)
    for m in mats:
        restricted = basis.conj().T @ m @ basis
        vals, vecs = np.linalg.eigh((restricted + restricted.conj().T) / 2)
        keep = vals > 1 - 1e-8
        if not keep.any():
            keep = vals < -1 + 1e-8
        if not keep.any():
            raise ValueError("operator has no +-1 eigenvalue on the current subspace")
        basis = basis @ vecs[:, keep]
    return basis[:, 0]


def z_gadget(w: float) -> np.ndarray:
    """``w X + sqrt(1 - w^2) Z``."""
    if abs(w) > 1:
        raise ValueError("|w| must not exceed 1")
    return np.array([[np.sqrt(1 - w * w), w], [w, -np.sqrt(1 - w * w)]], dtype=complex)


def scale_gadget(strings, weights: Sequence[float], rho: np.ndarray
                 ) -> tuple[list[np.ndarray], np.ndarray]:
    """Rescale expectations by ``w_i`` with one auxiliary qubit per operator.

    Returns ``P_i = S_i ⊗ Z(w_i)`` on auxiliary slot ``i`` and
    ``tau = rho ⊗ |+><+|^{⊗n}``, so that ``<P_i>_tau = w_i <S_i>_rho``.
    """
    w = [float(x) for x in weights]
    if len(w) != len(strings):
        raise ValueError("one weight per operator is required")
    if any(abs(x) > 1 for x in w):
        raise ValueError("|w_i| must not exceed 1")
    mats = [to_matrix(s) if isinstance(s, PauliString) else np.asarray(s, dtype=complex)
            for s in strings]
    n = len(mats)
    eye2 = np.eye(2)
    out = []
    for i, m in enumerate(mats):
        aux = np.ones((1, 1))
        for j in range(n):
            aux = np.kron(aux, z_gadget(w[i]) if j == i else eye2)
        out.append(np.kron(m, aux))
    plus = np.full((2, 2), 0.5)
    tau = np.asarray(rho, dtype=complex)
    for _ in range(n):
        tau = np.kron(tau, plus)
    return out, tau
