"""Lovász theta and two-copy relaxations built on the block solver."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..graphs import Graph
from ..numerics import partial_transpose, symmetric_isometry
from ..pauli import PauliString, to_matrix
from .solver import Block, SdpGuardError, SdpProblem, SdpSolution, solve_sdp

THETA_VERTEX_LIMIT = 64
MAX_VARIABLES = 3000


@dataclass
class ThetaResult:
    """``value`` is ``lambda_max(J_w + sum_e y_e E_e)`` for the solver's edge
    multipliers, an upper bound on theta that holds exactly for any ``y``.
    ``primal`` is the attained ``sum sqrt(w_i w_j) X_ij``."""

    value: float
    primal: float
    certificate: np.ndarray
    status: str
    solution: SdpSolution | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {"theta": self.value, "primal": self.primal, "status": self.status,
                "certificate": self.certificate.tolist()}


def _check_weights(w, n: int, allow_signed: bool = False) -> np.ndarray:
    w = np.ones(n) if w is None else np.asarray(w, dtype=float)
    if w.shape != (n,):
        raise ValueError(f"expected {n} weights, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite")
    if not allow_signed and np.any(w < 0):
        raise ValueError("weights must be non-negative")
    return w


def theta_problem(g: Graph, w=None) -> SdpProblem:
    """``min -<J_w, X>`` with ``tr X = 1`` and ``X_ij = 0`` on edges."""
    w = _check_weights(g.weights if w is None else w, g.n)
    n = g.n
    edges = g.edges()
    A = np.zeros((1 + len(edges), n, n))
    A[0] = np.eye(n)
    for k, (i, j) in enumerate(edges, start=1):
        A[k, i, j] = A[k, j, i] = 0.5
    b = np.zeros(1 + len(edges))
    b[0] = 1.0
    sw = np.sqrt(w)
    return SdpProblem([Block("s", n)], [-np.outer(sw, sw)], [A], b)


def lovasz_theta(g: Graph, w=None, tol: float = 1e-9) -> ThetaResult:
    """Weighted Lovász number ``theta(G, w)``; weights default to ``g.weights``."""
    if g.n > THETA_VERTEX_LIMIT:
        raise SdpGuardError(f"{g.n} vertices exceeds the theta limit of {THETA_VERTEX_LIMIT}")
    w = _check_weights(g.weights if w is None else w, g.n)
    if g.n == 0:
        return ThetaResult(0.0, 0.0, np.zeros((0, 0)), "optimal")
    if not np.any(w):
        return ThetaResult(0.0, 0.0, np.eye(g.n) / g.n, "optimal")
    prob = theta_problem(g, w)
    sol = solve_sdp(prob, tol=tol)
    sw = np.sqrt(w)
    dual_matrix = np.outer(sw, sw) + np.tensordot(sol.y[1:], prob.A[0][1:], axes=1)
    certified = float(np.linalg.eigvalsh(dual_matrix)[-1])
    X = sol.X[0]
    return ThetaResult(certified, float(sw @ X @ sw), X, sol.status, sol)


# -- two-copy relaxations --------------------------------------------------

@dataclass
class QUpperResult:
    """``value`` is a weak-duality upper bound that accounts for the residual
    primal infeasibility; ``dual`` is attained by the returned ``state``."""

    value: float
    primal: float
    dual: float
    status: str
    level: str
    real: bool
    state: np.ndarray | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {"value": self.value, "primal": self.primal, "dual": self.dual,
                "status": self.status, "level": self.level, "real": self.real}


def _as_matrices(ops) -> list[np.ndarray]:
    mats = [to_matrix(o) if isinstance(o, PauliString) else np.asarray(o, dtype=complex)
            for o in ops]
    if not mats:
        raise ValueError("at least one operator is required")
    d = mats[0].shape[0]
    if any(m.shape != (d, d) for m in mats):
        raise ValueError("dimension mismatch between operators")
    return mats


def _traceless_basis(s: int, real: bool) -> np.ndarray:
    """Orthonormal basis (real trace inner product) of traceless ``s x s``
    symmetric, or Hermitian, matrices."""
    mats = []
    for k in range(1, s):
        m = np.zeros((s, s))
        m[np.arange(k), np.arange(k)] = 1.0
        m[k, k] = -k
        mats.append(m / np.sqrt(k * (k + 1)))
    for i in range(s):
        for j in range(i + 1, s):
            m = np.zeros((s, s))
            m[i, j] = m[j, i] = 1 / np.sqrt(2)
            mats.append(m)
    out = np.array(mats).reshape(-1, s, s)
    if real:
        return out
    imag = []
    for i in range(s):
        for j in range(i + 1, s):
            m = np.zeros((s, s), dtype=complex)
            m[i, j], m[j, i] = -1j / np.sqrt(2), 1j / np.sqrt(2)
            imag.append(m)
    return np.concatenate([out.astype(complex), np.array(imag).reshape(-1, s, s)])


def _certified_upper(prob: SdpProblem, sol: SdpSolution, radius: float) -> float:
    """Weak-duality bound ``<C, X> + radius * ||b - A(X)||`` on ``max b^T y``.

    Valid whenever ``X ⪰ 0`` and every feasible ``y`` has norm at most
    ``radius``; negative eigenvalues of ``X`` are clipped first.
    """
    X = []
    for blk, x in zip(prob.blocks, sol.X):
        if blk.kind == "l":
            X.append(np.maximum(x, 0))
        else:
            vals, vecs = np.linalg.eigh((x + x.conj().T) / 2)
            X.append((vecs * np.maximum(vals, 0)) @ vecs.conj().T)
    residual = prob.b.copy()
    obj = 0.0
    for a, c, x in zip(prob.A, prob.C, X):
        m = a.shape[0]
        residual -= np.real(a.reshape(m, -1).conj() @ x.reshape(-1))
        obj += float(np.real(np.vdot(c, x)))
    return obj + radius * float(np.linalg.norm(residual))


def _two_copy_operator(mats, w) -> np.ndarray:
    return sum(wi * np.kron(m, m) for wi, m in zip(w, mats))


def _is_real(*arrays) -> bool:
    return all(np.max(np.abs(np.imag(a)), initial=0.0) < 1e-12 for a in arrays)


def _solve_lifted(W, lift, s: int, d: int, cuts, real: bool, tol: float,
                  dimension_limit: int, level: str) -> QUpperResult:
    """Maximize ``<W, lift(G)>`` over unit-trace ``G ⪰ 0`` (size ``s``) with
    ``PT(lift(G)) ⪰ 0`` and ``<A_c, lift(G)> >= 0`` for each cut.

    ``lift`` maps a stack of ``s x s`` matrices to ``d^2 x d^2`` operators.
    The program is posed in LMI form over the traceless coordinates of G.
    """
    B = _traceless_basis(s, real)
    nvar = B.shape[0]
    if nvar > MAX_VARIABLES:
        raise SdpGuardError(f"{nvar} variables exceeds the limit of {MAX_VARIABLES}")
    G0 = np.eye(s) / s
    L0 = lift(G0[None])[0]
    LB = lift(B)
    cast = np.real if real else (lambda a: a)
    kind = "s" if real else "h"
    pt = lambda m: partial_transpose(m, (d, d))
    PT0 = cast(pt(L0))
    PTB = cast(LB.reshape(nvar, d, d, d, d).transpose(0, 1, 4, 3, 2).reshape(nvar, d * d, d * d))
    blocks = [Block(kind, s), Block(kind, d * d)]
    C = [cast(G0.astype(complex)), PT0]
    A = [-cast(B), -PTB]
    if cuts:
        cmats = [np.asarray(c, dtype=complex) for c in cuts]
        blocks.append(Block("l", len(cmats)))
        C.append(np.array([np.real(np.vdot(c, L0)) for c in cmats]))
        A.append(-np.array([[np.real(np.vdot(c, lb)) for c in cmats] for lb in LB]))
    b = np.real(np.einsum("kij,ij->k", LB.conj(), W))
    const = float(np.real(np.vdot(L0, W)))
    prob = SdpProblem(blocks, C, A, b)
    sol = solve_sdp(prob, tol=tol, dimension_limit=dimension_limit)
    # feasible y are orthonormal coordinates of G - I/s, so |y| <= sqrt(1 - 1/s)
    upper = const + _certified_upper(prob, sol, np.sqrt(1 - 1 / s))
    state = G0 + np.tensordot(sol.y, B, axes=1)
    return QUpperResult(upper, const + sol.primal_value, const + sol.dual_value,
                        sol.status, level, real, state)


def q_upper_ppt(ops, w=None, cuts: Sequence[np.ndarray] | None = None,
                allow_signed: bool = False, tol: float = 1e-9,
                dimension_limit: int = 256) -> QUpperResult:
    """Upper bound on ``max_rho sum_i w_i <S_i>^2`` from the two-copy PPT relaxation.

    ``gamma`` lives on the symmetric subspace of ``H ⊗ H`` (so it is swap
    invariant), has unit trace and a PSD partial transpose. Each optional cut
    ``A`` (a ``d^2 x d^2`` Hermitian matrix) adds ``tr(A gamma) >= 0``. When
    the two-copy objective and all cuts are real, ``gamma`` is restricted to
    real matrices, which loses nothing because the feasible set is closed
    under complex conjugation.
    """
    mats = _as_matrices(ops)
    w = _check_weights(w, len(mats), allow_signed)
    d = mats[0].shape[0]
    if d * d > dimension_limit:
        raise SdpGuardError(f"two-copy dimension {d * d} exceeds the limit of {dimension_limit}")
    W = _two_copy_operator(mats, w)
    if not np.any(W):
        return QUpperResult(0.0, 0.0, 0.0, "optimal", "ppt", True)
    real = _is_real(W, *(cuts or []))
    V = symmetric_isometry(d, 2)
    lift = lambda G: V @ G @ V.T
    return _solve_lifted(W, lift, V.shape[1], d, cuts, real, tol, dimension_limit, "ppt")


def q_upper_threehalf(ops, w=None, cuts: Sequence[np.ndarray] | None = None,
                      allow_signed: bool = False, tol: float = 1e-9,
                      dimension_limit: int = 256) -> QUpperResult:
    """Experimental tighter level: a three-copy symmetric ``tau`` whose
    third-copy marginal ``gamma`` must have a PSD partial transpose.

    Every feasible ``gamma`` is feasible for ``q_upper_ppt``, so the value
    never exceeds it.
    """
    mats = _as_matrices(ops)
    w = _check_weights(w, len(mats), allow_signed)
    d = mats[0].shape[0]
    if d**3 > dimension_limit:
        raise SdpGuardError(f"three-copy dimension {d**3} exceeds the limit of {dimension_limit}")
    W = _two_copy_operator(mats, w)
    if not np.any(W):
        return QUpperResult(0.0, 0.0, 0.0, "optimal", "3half", True)
    real = _is_real(W, *(cuts or []))
    V3 = symmetric_isometry(d, 3)

    def lift(T):
        full = V3 @ T @ V3.T
        k = full.shape[0]
        return np.einsum("nakbk->nab", full.reshape(k, d * d, d, d * d, d))

    return _solve_lifted(W, lift, V3.shape[1], d, cuts, real, tol, dimension_limit, "3half")
