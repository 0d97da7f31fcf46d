"""Certified intervals for beta(G, w) and their applications.

Upper bounds only ever come from the Lovász number or from exact
decomposition rules applied to such bounds. See-saw values are used as lower
bounds or as explicitly tagged reference numbers, never as upper bounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import graphs as gr
from .graphs import Graph, GraphError
from .numerics import min_eigenvalue, random_pure_state
from .pauli import PauliString, parse_pauli, to_matrix
from .represent import frustration_graph, standard_saur, verify_representation
from .sdp.programs import lovasz_theta
from .seesaw import SeeSawConfig, q_lower, signed_seesaw, weighted_square_sum

RULE_TIE = 1e-9
ALPHA_THETA_TOL = 1e-7


# -- beta upper bounds -------------------------------------------------------

@dataclass
class UpperBound:
    value: float
    provenance: str
    witness: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"value": self.value, "provenance": self.provenance, "witness": self.witness}


@dataclass(frozen=True)
class LexDeclaration:
    """Claim that the graph equals ``lexicographic(outer, inner)`` vertex by vertex."""

    outer: Graph
    inner: Graph


@dataclass(frozen=True)
class EmbeddingDeclaration:
    """Claim that the graph is the subgraph of ``lexicographic(outer, inner)``
    induced on ``vertices`` (in that order)."""

    outer: Graph
    inner: Graph
    vertices: tuple[int, ...]


def _weights(g: Graph, w) -> np.ndarray:
    w = np.asarray(g.weights if w is None else w, dtype=float)
    if w.shape != (g.n,):
        raise ValueError(f"expected {g.n} weights, got shape {w.shape}")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite and non-negative")
    return w


def _uniform(w: np.ndarray) -> float | None:
    if len(w) and np.all(w == w[0]):
        return float(w[0])
    return None


def check_lex_declaration(g: Graph, decl: LexDeclaration) -> None:
    product = gr.lexicographic(decl.outer, decl.inner)
    if not product.same_adjacency(g):
        raise GraphError("declared lexicographic factorization does not match the graph")


def check_embedding_declaration(g: Graph, decl: EmbeddingDeclaration) -> None:
    host = gr.lexicographic(decl.outer, decl.inner)
    if len(set(decl.vertices)) != len(decl.vertices) or len(decl.vertices) != g.n:
        raise GraphError("embedding must list one distinct host vertex per graph vertex")
    if any(not 0 <= v < host.n for v in decl.vertices):
        raise GraphError("embedding vertex outside the host graph")
    if not host.induced_subgraph(list(decl.vertices)).same_adjacency(g):
        raise GraphError("declared embedding is not an induced subgraph of the product")


def beta_upper(g: Graph, w=None, declarations: Sequence = (), _cache=None) -> UpperBound:
    """Smallest certified upper bound on ``beta(G, w)`` among the rules.

    Candidates: theta; disjoint components (sum); join of complement
    components (max); cycles with uniform weights (independence number);
    alpha == theta to ``1e-7`` (then beta = alpha); declared lexicographic
    factorizations (product, uniform weights); declared embeddings into a
    lexicographic product (monotone under vertex removal, uniform weights).
    A rule replaces the theta bound on ties.
    """
    w = _weights(g, w)
    cache = {} if _cache is None else _cache
    key = (g.n, tuple(g.adj), tuple(w.tolist()))
    if key in cache:
        return cache[key]
    if g.n == 0:
        return UpperBound(0.0, "theta")
    if g.is_edgeless():
        res = UpperBound(float(w.sum()), "alpha-equals-theta",
                         {"alpha": float(w.sum()), "theta": float(w.sum())})
        cache[key] = res
        return res

    candidates: list[UpperBound] = []
    comps = gr.connected_components(g)
    if len(comps) > 1:
        parts = [beta_upper(g.induced_subgraph(c), w[c], (), cache) for c in comps]
        candidates.append(UpperBound(sum(p.value for p in parts), "union-rule",
                                     {"components": comps, "parts": [p.to_dict() for p in parts]}))
    co_comps = gr.connected_components(gr.complement(g))
    if len(co_comps) > 1:
        parts = [beta_upper(g.induced_subgraph(c), w[c], (), cache) for c in co_comps]
        candidates.append(UpperBound(max(p.value for p in parts), "join-rule",
                                     {"parts_vertices": co_comps, "parts": [p.to_dict() for p in parts]}))
    scale = _uniform(w)
    if scale is not None and gr.is_cycle(g):
        alpha = gr.independence_number(g)
        candidates.append(UpperBound(scale * alpha, "cycle-rule", {"cycle_length": g.n, "alpha": alpha}))
    for decl in declarations:
        if scale is None:
            raise GraphError("product rules need uniform weights")
        if isinstance(decl, LexDeclaration):
            check_lex_declaration(g, decl)
            a = beta_upper(decl.outer, None, (), cache)
            b = beta_upper(decl.inner, None, (), cache)
            candidates.append(UpperBound(scale * a.value * b.value, "lexicographic-rule",
                                         {"outer": a.to_dict(), "inner": b.to_dict()}))
        elif isinstance(decl, EmbeddingDeclaration):
            check_embedding_declaration(g, decl)
            a = beta_upper(decl.outer, None, (), cache)
            b = beta_upper(decl.inner, None, (), cache)
            candidates.append(UpperBound(scale * a.value * b.value, "subgraph-of-product",
                                         {"vertices": list(decl.vertices),
                                          "outer": a.to_dict(), "inner": b.to_dict()}))
        else:
            raise TypeError(f"unknown declaration {decl!r}")

    theta = lovasz_theta(g, w).value
    alpha, witness = gr.weighted_independence(g, w)
    if theta - alpha < ALPHA_THETA_TOL:
        candidates.append(UpperBound(float(alpha), "alpha-equals-theta",
                                     {"alpha": float(alpha), "theta": theta,
                                      "independent_set": witness}))
    best = UpperBound(theta, "theta", {"theta": theta})
    for c in candidates:
        if c.value <= best.value + RULE_TIE:
            best = c if c.value < best.value or best.provenance == "theta" else best
    cache[key] = best
    return best


@dataclass
class BetaEstimate:
    lower: float
    upper: float
    lower_provenance: str
    upper_provenance: str
    graph: Graph
    weights: np.ndarray
    upper_witness: dict = field(default_factory=dict)
    lower_details: dict = field(default_factory=dict)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "lower_provenance": self.lower_provenance,
            "upper_provenance": self.upper_provenance,
            "graph": self.graph.to_dict(),
            "weights": [float(x) for x in self.weights],
            "upper_witness": self.upper_witness,
            "lower_details": {k: v for k, v in self.lower_details.items()},
        }


def beta_estimate(g: Graph, w=None, config: SeeSawConfig | None = None,
                  declarations: Sequence = ()) -> BetaEstimate:
    """Certified interval for ``beta(G, w)``.

    The lower side runs see-saw on the standard representation (which
    attains beta) together with the independent-set witness state.
    """
    w = _weights(g, w)
    up = beta_upper(g, w, declarations)
    strings = standard_saur(g)
    low = q_lower(strings, w, config or SeeSawConfig())
    lower = low.value
    if lower > up.value:
        if lower - up.value > 1e-8 * max(1.0, up.value):
            raise RuntimeError(f"lower bound {lower} exceeds certified upper bound {up.value}")
        lower = up.value
    return BetaEstimate(lower, up.value, low.provenance, up.provenance, g, w,
                        up.witness, low.details)


# -- ground-state energy -------------------------------------------------------

@dataclass
class GseRow:
    label: str
    weights: np.ndarray
    q_upper: float
    provenance: str
    bound: float

    def to_dict(self) -> dict:
        return {"label": self.label, "weights": [float(x) for x in self.weights],
                "q_upper": self.q_upper, "provenance": self.provenance, "bound": self.bound}


@dataclass
class GseBoundReport:
    rows: list[GseRow]
    best: int
    graph: Graph
    reference: float | None = None
    reference_lower: float | None = None

    @property
    def bound(self) -> float:
        return self.rows[self.best].bound

    def to_dict(self) -> dict:
        return {"rows": [r.to_dict() for r in self.rows], "best": self.best,
                "bound": self.bound, "graph": self.graph.to_dict(),
                "reference": self.reference, "reference_certified": False,
                "reference_beta_lower": self.reference_lower}


def _split_terms(terms) -> tuple[np.ndarray, list[PauliString]]:
    terms = [(float(a), parse_pauli(s) if isinstance(s, str) else s) for a, s in terms]
    if not terms:
        raise ValueError("at least one term is required")
    a = np.array([t[0] for t in terms])
    if not np.any(a):
        raise ValueError("all coefficients are zero")
    return a, [t[1] for t in terms]


def _energy_factor(a: np.ndarray, w: np.ndarray) -> float:
    nz = a != 0
    return float(np.sum(a[nz] ** 2 / w[nz]))


def gse_bound(terms, optimize: bool = True, iterations: int = 200,
              reference: bool = True, config: SeeSawConfig | None = None) -> GseBoundReport:
    """Upper bound on ``|<H>|`` for ``H = sum_i a_i A_i`` over all states.

    For a weight vector ``w`` (positive wherever ``a_i != 0``) Cauchy-Schwarz
    gives ``<H>^2 <= (sum a_i^2 / w_i) * beta(G, w)``. Rows use ``w = |a|^t``
    for ``t = 0, 1, 2`` (``t = 0`` keeps every vertex at weight one) and a
    log-space coordinate descent started from the best of them. Every row
    uses a certified upper bound on beta.
    """
    a, strings = _split_terms(terms)
    g = frustration_graph(strings)
    cache: dict = {}

    def evaluate(w):
        up = beta_upper(g, w, (), cache)
        return np.sqrt(_energy_factor(a, w) * up.value), up

    rows = []
    for t in (0, 1, 2):
        w = np.ones(len(a)) if t == 0 else np.abs(a) ** t
        value, up = evaluate(w)
        rows.append(GseRow(f"t={t}", w, up.value, up.provenance, float(value)))
    if optimize:
        start = min(rows, key=lambda r: r.bound)
        support = np.flatnonzero(a)
        logw = np.log(np.where(a != 0, start.weights, 1.0))
        best_val, best_up = evaluate(np.where(a != 0, np.exp(logw), 0.0))
        step = 0.5
        for it in range(iterations):
            k = support[it % len(support)]
            improved = False
            for sgn in (1.0, -1.0):
                trial = logw.copy()
                trial[k] += sgn * step
                val, up = evaluate(np.where(a != 0, np.exp(trial), 0.0))
                if val < best_val - 1e-12:
                    logw, best_val, best_up, improved = trial, val, up, True
                    break
            if not improved and k == support[-1]:
                step /= 2
                if step < 1e-6:
                    break
        w = np.where(a != 0, np.exp(logw), 0.0)
        w = w / w.max()
        rows.append(GseRow("optimized", w, best_up.value, best_up.provenance, float(best_val)))
    best = int(np.argmin([r.bound for r in rows]))
    report = GseBoundReport(rows, best, g)
    if reference:
        w = rows[best].weights
        low = q_lower(standard_saur(g), w, config or SeeSawConfig())
        report.reference_lower = low.value
        report.reference = float(np.sqrt(_energy_factor(a, w) * low.value))
    return report


# -- uncertainty ---------------------------------------------------------------

@dataclass
class UncertaintyBound:
    """Lower bound on ``sum_i Var(A_i)`` valid for every state."""

    value: float
    lambda_min: float
    theta_bound: float
    beta_bound: float | None
    weights: np.ndarray
    provenance: str

    def __float__(self) -> float:
        return self.value

    def to_dict(self) -> dict:
        return {"value": self.value, "lambda_min": self.lambda_min,
                "theta_bound": self.theta_bound, "beta_bound": self.beta_bound,
                "weights": [float(x) for x in self.weights], "provenance": self.provenance}


def uncertainty_bound(observables, g: Graph, check: bool = True) -> UncertaintyBound:
    """``lambda_min(sum A_i^2) - U(G, lambda)`` with ``lambda_i = max|eig(A_i)|^2``.

    ``U`` is theta or, when smaller, a rule-certified beta upper bound.
    Observables are matrices, Pauli strings, or ``(coefficient, string)``
    pairs; for the last two ``sum A_i^2`` is a multiple of the identity.
    """
    obs = list(observables)
    if len(obs) != g.n:
        raise ValueError(f"{len(obs)} observables for {g.n} vertices")
    pauli_like = all(isinstance(o, (PauliString, tuple)) for o in obs)
    if pauli_like:
        pairs = [(1.0, o) if isinstance(o, PauliString) else (float(o[0]), o[1]) for o in obs]
        lam = np.array([c * c for c, _ in pairs])
        lam_min = float(lam.sum())
        normalized = [s for _, s in pairs]
    else:
        mats = [to_matrix(o) if isinstance(o, PauliString) else np.asarray(o, dtype=complex)
                for o in obs]
        scales = np.array([np.max(np.abs(np.linalg.eigvalsh((m + m.conj().T) / 2))) for m in mats])
        lam = scales**2
        lam_min = min_eigenvalue(sum(m @ m for m in mats))
        normalized = [m / s if s > 0 else m for m, s in zip(mats, scales)]
    if check:
        report = verify_representation(normalized, g, "SARA")
        if not report:
            raise ValueError(f"observables are not a representation of the graph: {report.to_dict()}")
    theta = lovasz_theta(g, lam).value
    up = beta_upper(g, lam)
    beta_bound = lam_min - up.value if up.provenance != "theta" else None
    value = lam_min - min(theta, up.value)
    return UncertaintyBound(value, lam_min, lam_min - theta, beta_bound, lam, up.provenance)


# -- purity --------------------------------------------------------------------

def purity_bound(g: Graph, d: int, purity: float, w=None) -> float:
    """``min{(d p - 1) theta(G), theta(G)}`` for states of purity ``p``."""
    if d < 1:
        raise ValueError("dimension must be positive")
    if not 1 / d - 1e-12 <= purity <= 1 + 1e-12:
        raise ValueError(f"purity {purity} outside [1/{d}, 1]")
    theta = lovasz_theta(g, w).value
    return float(min((d * purity - 1) * theta, theta))


@dataclass
class PurityReport:
    lhs: float
    bound: float
    purity: float
    family: str
    holds: bool

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "bound": self.bound, "purity": self.purity,
                "family": self.family, "holds": self.holds}


def purity_check(ops, rho: np.ndarray, g: Graph | None = None, tol: float = 1e-9) -> PurityReport:
    """Evaluate both sides of the purity bound on a concrete family and state.

    A family that verifies as SARA of ``g`` gets ``min{(dp-1)theta, theta}``.
    Otherwise the family must be trace-orthogonal on edges, traceless and of
    squared norm ``d``, and gets ``(dp-1)theta``.
    """
    mats = [to_matrix(o) if isinstance(o, PauliString) else np.asarray(o, dtype=complex)
            for o in ops]
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    if g is None:
        if all(isinstance(o, PauliString) for o in ops):
            g = frustration_graph(list(ops))
        else:
            raise ValueError("a graph is required for matrix families")
    p = float(np.real(np.trace(rho @ rho)))
    lhs = float(sum(np.real(np.trace(rho @ m)) ** 2 for m in mats))
    theta = lovasz_theta(g).value
    if verify_representation(mats, g, "SARA"):
        family = "SARA"
        bound = min((d * p - 1) * theta, theta)
    else:
        gram = np.real(np.array([[np.vdot(a, b) for b in mats] for a in mats]))
        ok = (np.allclose(np.diag(gram), d, atol=tol)
              and all(abs(gram[i, j]) <= tol for i, j in g.edges())
              and all(abs(np.trace(m)) <= tol for m in mats))
        if not ok:
            raise ValueError("family is neither a SARA nor trace-orthogonal with norm d")
        family = "trace-orthogonal"
        bound = (d * p - 1) * theta
    return PurityReport(lhs, float(bound), p, family, lhs <= bound + tol)


# -- the two-qubit ladder identity ------------------------------------------

LADDER_TERMS = (("IY", 1.0), ("XX", 1.0), ("ZZ", 1.0), ("YY", -1.0))
LADDER_CUTS = ("XZ", "YI", "ZX")


def _two_copy(word: str) -> np.ndarray:
    m = to_matrix(parse_pauli(word))
    return np.kron(m, m)


def ladder_dual_matrix() -> np.ndarray:
    """``1 - XZXZ - YIYI - ZXZX - W`` with ``W = IYIY + XXXX + ZZZZ - YYYY``."""
    W = sum(c * _two_copy(s) for s, c in LADDER_TERMS)
    return np.eye(16) - sum(_two_copy(s) for s in LADDER_CUTS) - W


def ladder_dual_check(tol: float = 1e-9) -> bool:
    return min_eigenvalue(ladder_dual_matrix()) >= -tol


def ladder_value(state: np.ndarray) -> float:
    """``<IY>^2 + <XX>^2 + <ZZ>^2 - <YY>^2`` for a pure state or density matrix."""
    ops = [parse_pauli(s) for s, _ in LADDER_TERMS]
    return weighted_square_sum(ops, [c for _, c in LADDER_TERMS], state)


def ladder_value_scan(samples: int = 10_000, seed: int = 0,
                      config: SeeSawConfig | None = None) -> float:
    """Largest value found over random pure states and a signed see-saw."""
    ops = [parse_pauli(s) for s, _ in LADDER_TERMS]
    w = np.array([c for _, c in LADDER_TERMS])
    rng = np.random.default_rng(seed)
    psi = rng.standard_normal((samples, 4)) + 1j * rng.standard_normal((samples, 4))
    psi /= np.linalg.norm(psi, axis=1, keepdims=True)
    mats = np.array([to_matrix(o) for o in ops])
    exps = np.real(np.einsum("si,kij,sj->sk", psi.conj(), mats, psi))
    best = float(np.max(exps**2 @ w)) if samples else -np.inf
    run = signed_seesaw(ops, w, config or SeeSawConfig(restarts=8, seed=seed))
    return max(best, run.value)
