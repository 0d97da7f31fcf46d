"""Dense primal-dual interior-point solver for small block SDPs.

Problem pair, with ``<A, X> = Re tr(A X)`` summed over blocks::

    (P)  minimize  <C, X>   s.t.  <A_k, X> = b_k,  X ⪰ 0
    (D)  maximize  b^T y    s.t.  Z = C - sum_k y_k A_k ⪰ 0

Blocks are real symmetric (``"s"``), complex Hermitian (``"h"``) or
nonnegative orthants (``"l"``, stored as vectors). The search direction is
HKM with a Mehrotra predictor-corrector and an infeasible start.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import cho_factor, cho_solve

DIMENSION_LIMIT = 256
BLOCK_KINDS = ("s", "h", "l")


class SdpGuardError(ValueError):
    pass


@dataclass
class Block:
    kind: str
    dim: int

    def __post_init__(self):
        if self.kind not in BLOCK_KINDS:
            raise ValueError(f"unknown block kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError("block dimension must be positive")


@dataclass
class SdpProblem:
    """``A[j]`` holds the stacked constraint data of block ``j``: shape
    ``(m, n, n)`` for matrix blocks and ``(m, n)`` for LP blocks."""

    blocks: list[Block]
    C: list[np.ndarray]
    A: list[np.ndarray]
    b: np.ndarray

    def __post_init__(self):
        self.b = np.asarray(self.b, dtype=float)
        m = self.b.shape[0]
        if not (len(self.blocks) == len(self.C) == len(self.A)):
            raise ValueError("blocks, C and A must have one entry per block")
        for blk, c, a in zip(self.blocks, self.C, self.A):
            n = blk.dim
            shape_c = (n,) if blk.kind == "l" else (n, n)
            if c.shape != shape_c or a.shape != (m, *shape_c):
                raise ValueError(f"data of a {blk.kind} block of size {n} has the wrong shape")
            if blk.kind != "l":
                for mat in (c, *a):
                    if np.max(np.abs(mat - mat.conj().T), initial=0.0) > 1e-10:
                        raise ValueError("block data must be Hermitian")
                if blk.kind == "s" and (np.iscomplexobj(c) and np.any(c.imag)
                                         or np.iscomplexobj(a) and np.any(a.imag)):
                    raise ValueError("real symmetric blocks need real data")

    @property
    def n_constraints(self) -> int:
        return int(self.b.shape[0])

    @property
    def total_dim(self) -> int:
        return sum(b.dim for b in self.blocks if b.kind != "l")

    def to_dict(self) -> dict:
        """JSON-ready form: ``{"blocks", "constraints", "objective"}``.
        Complex entries are written as ``[re, im]`` pairs."""
        def enc(arr):
            if np.iscomplexobj(arr):
                return np.stack([arr.real, arr.imag], axis=-1).tolist()
            return np.asarray(arr).tolist()

        return {
            "blocks": [{"kind": b.kind, "dim": b.dim} for b in self.blocks],
            "objective": [enc(c) for c in self.C],
            "constraints": [{"rhs": float(self.b[k]),
                             "data": [enc(a[k]) for a in self.A]}
                            for k in range(self.n_constraints)],
        }

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh)

    @classmethod
    def from_dict(cls, data: dict) -> "SdpProblem":
        blocks = [Block(b["kind"], int(b["dim"])) for b in data["blocks"]]

        def dec(x, blk):
            arr = np.asarray(x, dtype=float)
            nd = 1 if blk.kind == "l" else 2
            if arr.ndim == nd + 1:
                arr = arr[..., 0] + 1j * arr[..., 1]
            return arr

        C = [dec(c, blk) for c, blk in zip(data["objective"], blocks)]
        cons = data["constraints"]
        A = [np.array([dec(k["data"][j], blk) for k in cons]).reshape(
            (len(cons), *C[j].shape)) for j, blk in enumerate(blocks)]
        return cls(blocks, C, A, np.array([k["rhs"] for k in cons]))


@dataclass
class SdpSolution:
    status: str
    primal_value: float
    dual_value: float
    X: list[np.ndarray]
    y: np.ndarray
    Z: list[np.ndarray]
    primal_infeasibility: float
    dual_infeasibility: float
    iterations: int
    history: list[dict] = field(default_factory=list)

    @property
    def gap(self) -> float:
        return abs(self.primal_value - self.dual_value)

    @property
    def value(self) -> float:
        return 0.5 * (self.primal_value + self.dual_value)


def _inner(blocks, U, V) -> float:
    return float(sum(np.real(np.vdot(u, v)) for u, v in zip(U, V)))


def _op(problem, X) -> np.ndarray:
    out = np.zeros(problem.n_constraints)
    for a, x in zip(problem.A, X):
        m = a.shape[0]
        out += np.real(a.reshape(m, -1).conj() @ x.reshape(-1))
    return out


def _adj(problem, y) -> list[np.ndarray]:
    return [np.tensordot(y, a, axes=1) for a in problem.A]


def _herm(m):
    return (m + m.conj().T) / 2


def _max_step(blk, x, dx, gamma=0.95) -> float:
    if blk.kind == "l":
        neg = dx < 0
        if not np.any(neg):
            return 1.0
        return min(1.0, gamma * float(np.min(-x[neg] / dx[neg])))
    try:
        L = np.linalg.cholesky(x)
    except np.linalg.LinAlgError:
        return 0.0
    Li = np.linalg.inv(L)
    lam = np.linalg.eigvalsh(_herm(Li @ dx @ Li.conj().T))[0]
    if lam >= 0:
        return 1.0
    return min(1.0, -gamma / lam)


def solve_sdp(problem: SdpProblem, tol: float = 1e-9, max_iter: int = 100,
              dimension_limit: int = DIMENSION_LIMIT) -> SdpSolution:
    """Solve ``problem``; see the module docstring for the sign conventions.

    The status is ``"optimal"`` when relative gap and both relative
    infeasibilities fall below ``tol``, otherwise ``"max_iter"`` or
    ``"stalled"`` with the last iterate.
    """
    if problem.total_dim > dimension_limit:
        raise SdpGuardError(f"total block dimension {problem.total_dim} "
                            f"exceeds the limit of {dimension_limit}")
    blocks, C, A, b = problem.blocks, problem.C, problem.A, problem.b
    m = problem.n_constraints
    dtypes = [complex if blk.kind == "h" else float for blk in blocks]

    # SDPT3-style starting point
    X, Z = [], []
    for blk, c, a in zip(blocks, C, A):
        n = blk.dim
        anorm = np.sqrt(np.sum(np.abs(a.reshape(m, -1)) ** 2, axis=1)) if m else np.zeros(0)
        xi = max(10.0, np.sqrt(n), n * float(np.max((1 + np.abs(b)) / (1 + anorm), initial=0.0)))
        eta = max(10.0, np.sqrt(n), float(np.max(anorm, initial=0.0)),
                  float(np.linalg.norm(c)))
        if blk.kind == "l":
            X.append(np.full(n, xi))
            Z.append(np.full(n, eta))
        else:
            X.append(xi * np.eye(n, dtype=dtypes[len(X)]))
            Z.append(eta * np.eye(n, dtype=dtypes[len(Z)]))
    y = np.zeros(m)
    nu = sum(blk.dim for blk in blocks)
    bnorm = 1 + np.linalg.norm(b)
    cnorm = 1 + np.sqrt(sum(np.linalg.norm(c) ** 2 for c in C))
    history = []
    status = "max_iter"
    it = 0

    for it in range(1, max_iter + 1):
        rp = b - _op(problem, X)
        Rd = [c - z - aty for c, z, aty in zip(C, Z, _adj(problem, y))]
        mu = _inner(blocks, X, Z) / nu
        pobj = _inner(blocks, C, X)
        dobj = float(b @ y)
        pinf = np.linalg.norm(rp) / bnorm
        dinf = np.sqrt(sum(np.linalg.norm(r) ** 2 for r in Rd)) / cnorm
        relgap = abs(pobj - dobj) / (1 + abs(pobj) + abs(dobj))
        history.append({"iter": it, "pobj": pobj, "dobj": dobj, "pinf": pinf,
                        "dinf": dinf, "gap": relgap, "mu": mu})
        if it == 1:
            mu0, pinf0, dinf0 = mu, pinf, dinf
        if max(relgap, pinf, dinf) < tol:
            status = "optimal"
            break

        try:
            Zinv = [1 / z if blk.kind == "l" else np.linalg.inv(z) for blk, z in zip(blocks, Z)]
        except np.linalg.LinAlgError:
            status = "stalled"
            break
        M = np.zeros((m, m))
        for blk, a, x, zi in zip(blocks, A, X, Zinv):
            if blk.kind == "l":
                M += (a * (x * zi)) @ a.T
            else:
                G = x @ a @ zi
                M += np.real(a.reshape(m, -1).conj() @ G.reshape(m, -1).T)
        M = (M + M.T) / 2
        try:
            factor = cho_factor(M + 1e-14 * np.trace(M) / max(m, 1) * np.eye(m))
            solve = lambda r: cho_solve(factor, r)
        except np.linalg.LinAlgError:
            pinvM = np.linalg.pinv(M)
            solve = lambda r: pinvM @ r

        def direction(R):
            # R[j] plays the role of sigma*mu*I - corrector, per block
            rhs = rp.copy()
            base = []
            for blk, x, zi, rd, r in zip(blocks, X, Zinv, Rd, R):
                if blk.kind == "l":
                    t = r * zi - x - x * rd * zi
                else:
                    t = r @ zi - x - x @ rd @ zi
                base.append(t)
            rhs -= _op(problem, base)
            dy = solve(rhs)
            dZ = [rd - aty for rd, aty in zip(Rd, _adj(problem, dy))]
            dX = []
            for blk, x, zi, dz, t, r in zip(blocks, X, Zinv, dZ, base, R):
                if blk.kind == "l":
                    dX.append(r * zi - x - x * dz * zi)
                else:
                    dX.append(_herm(r @ zi - x - x @ dz @ zi))
            return dX, dy, dZ

        def steps(dX, dZ):
            ap = min(_max_step(blk, x, d) for blk, x, d in zip(blocks, X, dX))
            ad = min(_max_step(blk, z, d) for blk, z, d in zip(blocks, Z, dZ))
            return ap, ad

        zero = [np.zeros(blk.dim) if blk.kind == "l" else np.zeros((blk.dim, blk.dim))
                for blk in blocks]
        dXa, dya, dZa = direction(zero)
        ap, ad = steps(dXa, dZa)
        mu_aff = _inner(blocks, [x + ap * d for x, d in zip(X, dXa)],
                        [z + ad * d for z, d in zip(Z, dZa)]) / nu
        sigma = min(1.0, (mu_aff / mu) ** 3) if mu > 0 else 0.0
        # mu may not shrink faster than the infeasibilities, or the iterates
        # reach the cone boundary while still infeasible
        lag = max(pinf / pinf0 if pinf0 > 0 else 0.0, dinf / dinf0 if dinf0 > 0 else 0.0)
        if mu > 0:
            sigma = min(1.0, max(sigma, 0.1 * mu0 * lag / mu))
        R = []
        for blk, dxa, dza in zip(blocks, dXa, dZa):
            if blk.kind == "l":
                R.append(sigma * mu - dxa * dza)
            else:
                R.append(sigma * mu * np.eye(blk.dim) - dxa @ dza)
        dX, dy, dZ = direction(R)
        ap, ad = steps(dX, dZ)
        if max(ap, ad) < 1e-10:
            status = "stalled"
            break
        X = [x + ap * d for x, d in zip(X, dX)]
        y = y + ad * dy
        Z = [z + ad * d for z, d in zip(Z, dZ)]

    pinf = float(np.linalg.norm(b - _op(problem, X)) / bnorm)
    dinf = float(np.sqrt(sum(np.linalg.norm(c - z - aty) ** 2
                             for c, z, aty in zip(C, Z, _adj(problem, y)))) / cnorm)
    return SdpSolution(status, _inner(blocks, C, X), float(b @ y), X, y, Z,
                       pinf, dinf, it, history)


def lp_block(values: Sequence[float]) -> np.ndarray:
    return np.asarray(values, dtype=float)
