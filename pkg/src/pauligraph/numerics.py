"""Dense and matrix-free linear algebra helpers."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations
from math import factorial
from typing import Callable, Literal

import numpy as np
from scipy.linalg import eigh_tridiagonal

LANCZOS_QUBIT_LIMIT = 24


class NotHermitianError(ValueError):
    pass


class LanczosConvergenceError(RuntimeError):
    """Lanczos did not reach the residual tolerance.

    ``estimate`` holds the best Ritz value found.
    """

    def __init__(self, message: str, estimate: float):
        super().__init__(message)
        self.estimate = estimate


def hermitian_part(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2


def eigh(m: np.ndarray, atol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors of a Hermitian matrix."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("eigh needs a square matrix")
    scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
    if np.max(np.abs(m - m.conj().T), initial=0.0) > atol * scale:
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    return np.linalg.eigh(hermitian_part(m))


def expectation(op: np.ndarray, state: np.ndarray) -> float:
    """``<psi|A|psi>`` for a vector or ``tr(rho A)`` for a density matrix."""
    state = np.asarray(state)
    if state.ndim == 1:
        return float(np.real(np.vdot(state, op @ state)))
    return float(np.real(np.trace(state @ op)))


# -- Lanczos ---------------------------------------------------------------

@dataclass
class ExtremeEigs:
    minimum: float | None
    maximum: float | None
    min_vector: np.ndarray | None
    max_vector: np.ndarray | None
    iterations: dict


def _lanczos_max(matvec: Callable[[np.ndarray], np.ndarray], dim: int, tol: float,
                 max_iter: int, rng: np.random.Generator) -> tuple[float, np.ndarray, int]:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    basis = [v]
    alphas: list[float] = []
    betas: list[float] = []
    best = -np.inf
    steps = min(max_iter, dim)
    for k in range(steps):
        w = matvec(basis[-1])
        alpha = float(np.real(np.vdot(basis[-1], w)))
        alphas.append(alpha)
        w = w - alpha * basis[-1]
        if k:
            w = w - betas[-1] * basis[-2]
        V = np.array(basis)
        for _ in range(2):
            w = w - V.T @ (V.conj() @ w)
        beta = float(np.linalg.norm(w))
        vals, vecs = eigh_tridiagonal(np.array(alphas), np.array(betas),
                                      select="i", select_range=(k, k))
        theta, s = float(vals[0]), vecs[:, 0]
        best = max(best, theta)
        residual = beta * abs(s[-1])
        if residual < tol or beta < 1e-14 or k == dim - 1:
            ritz = np.array(basis).T @ s
            return theta, ritz / np.linalg.norm(ritz), k + 1
        betas.append(beta)
        basis.append(w / beta)
    raise LanczosConvergenceError(
        f"Lanczos did not converge in {steps} iterations", best)


def extreme_eigs(h, which: Literal["min", "max", "both"] = "both", tol: float = 1e-8,
                 max_iter: int = 500, seed: int = 0) -> ExtremeEigs:
    """Extreme eigenvalues of a Hermitian operator via Lanczos.

    ``h`` is a ``PauliSumOperator`` (anything with ``matvec`` and
    ``n_qubits``) or a dense Hermitian matrix. Full reorthogonalization is
    used; the minimum comes from a separate run on ``-h``. Convergence means
    a Ritz residual below ``tol``.
    """
    if hasattr(h, "matvec"):
        n = getattr(h, "n_qubits", None)
        if n is not None and n > LANCZOS_QUBIT_LIMIT:
            raise ValueError(f"{n} qubits exceeds the Lanczos limit of {LANCZOS_QUBIT_LIMIT}")
        dim = h.dim
        mv = h.matvec
    else:
        m = np.asarray(h)
        dim = m.shape[0]
        mv = m.__matmul__
    if which not in ("min", "max", "both"):
        raise ValueError("which must be 'min', 'max' or 'both'")
    lo = hi = None
    lo_vec = hi_vec = None
    iters = {}
    if which in ("max", "both"):
        hi, hi_vec, iters["max"] = _lanczos_max(mv, dim, tol, max_iter,
                                                np.random.default_rng(seed))
    if which in ("min", "both"):
        val, lo_vec, iters["min"] = _lanczos_max(lambda v: -mv(v), dim, tol, max_iter,
                                                 np.random.default_rng(seed))
        lo = -val
    return ExtremeEigs(lo, hi, lo_vec, hi_vec, iters)


# -- PSD, partial transpose, swap ----------------------------------------------

def is_psd(m: np.ndarray, tol: float = 1e-9) -> bool:
    return bool(np.linalg.eigvalsh(hermitian_part(np.asarray(m)))[0] >= -tol)


def min_eigenvalue(m: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(hermitian_part(np.asarray(m)))[0])


def partial_transpose(m: np.ndarray, dims: tuple[int, int]) -> np.ndarray:
    """Transpose the indices of the second tensor factor."""
    da, db = dims
    m = np.asarray(m)
    if m.shape != (da * db, da * db):
        raise ValueError(f"shape {m.shape} does not match dims {dims}")
    return m.reshape(da, db, da, db).transpose(0, 3, 2, 1).reshape(da * db, da * db)


def swap_operator(d: int) -> np.ndarray:
    """``F = sum_ij |ij><ji|`` on ``C^d ⊗ C^d``."""
    f = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            f[i * d + j, j * d + i] = 1.0
    return f


def symmetric_isometry(d: int, copies: int = 2) -> np.ndarray:
    """Columns form an orthonormal basis of the symmetric subspace of ``(C^d)^{⊗k}``."""
    cols = []
    for combo in combinations_with_replacement(range(d), copies):
        v = np.zeros(d**copies)
        for perm in set(permutations(combo)):
            idx = 0
            for p in perm:
                idx = idx * d + p
            v[idx] = 1.0
        cols.append(v / np.linalg.norm(v))
    return np.array(cols).T


def symmetric_dimension(d: int, copies: int = 2) -> int:
    out = 1
    for k in range(copies):
        out *= d + k
    return out // factorial(copies)


# -- random states -------------------------------------------------------------

def random_pure_state(d: int, seed=None) -> np.ndarray:
    """Haar-random unit vector (complex Gaussian, normalized)."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_density(d: int, seed=None, rank: int | None = None) -> np.ndarray:
    """Normalized Wishart matrix ``G G^† / tr`` with ``G`` of shape ``d x rank``."""
    rank = d if rank is None else rank
    if not 1 <= rank <= d:
        raise ValueError("rank must lie in [1, d]")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    rho = hermitian_part(rho)
    return rho / np.real(np.trace(rho))


def purity(rho: np.ndarray) -> float:
    rho = np.asarray(rho)
    return float(np.real(np.trace(rho @ rho)))
