"""See-saw lower bounds on ``Q({S_i}, w) = max_rho sum_i w_i <S_i>^2``.

Two alternating schemes are provided. The bilinear one optimizes two states
against each other through ``f(rho1, rho2) = sum_i w_i <S_i>_1 <S_i>_2``; the
coefficient one alternates between a unit vector ``c`` and a state. Both
report ``sum_i w_i <S_i>^2`` on a concrete state, so every returned value is
attained and therefore a valid lower bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from .graphs import weighted_independence
from .numerics import random_pure_state
from .pauli import PauliString, _phase_signs, _string_phase, to_matrix
from .represent import anticommutation_graph, frustration_graph, independent_set_state

DENSE_LIMIT = 256
# above this dimension top eigenpairs come from warm-started ARPACK
ITERATIVE_FROM = 64


@dataclass(frozen=True)
class SeeSawConfig:
    restarts: int = 32
    max_iters: int = 500
    rel_tol: float = 1e-12
    seed: int = 0
    witness_restart: bool = True

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass
class SeeSawResult:
    value: float
    state: np.ndarray
    method: str
    iterations_used: int
    coefficients: np.ndarray | None = None
    states: tuple[np.ndarray, ...] = ()
    objective: float = 0.0
    history: list[float] = field(default_factory=list)
    restart: int | str = 0

    def to_dict(self) -> dict:
        return {"value": self.value, "method": self.method,
                "iterations": self.iterations_used, "objective": self.objective,
                "restart": self.restart}


@dataclass
class LowerBound:
    value: float
    provenance: str
    state: np.ndarray
    details: dict = field(default_factory=dict)


class OperatorFamily:
    """A list of equal-dimension Hermitian operators with fast expectation
    values and top-|eigenvalue| solves for their real linear combinations."""

    def __init__(self, ops):
        ops = list(ops)
        if not ops:
            raise ValueError("at least one operator is required")
        self.paulis = all(isinstance(o, PauliString) for o in ops)
        if self.paulis:
            n = ops[0].n_qubits
            if any(o.n_qubits != n for o in ops):
                raise ValueError("dimension mismatch between Pauli strings")
            self.dim = 1 << n
        else:
            mats = [to_matrix(o) if isinstance(o, PauliString) else np.asarray(o, dtype=complex)
                    for o in ops]
            self.dim = mats[0].shape[0]
            for m in mats:
                if m.shape != (self.dim, self.dim):
                    raise ValueError("dimension mismatch between operators")
                if np.max(np.abs(m - m.conj().T)) > 1e-10 * max(1.0, np.max(np.abs(m))):
                    raise ValueError("operators must be Hermitian")
        self.ops = ops
        self.k = len(ops)
        # Pauli strings above the iterative threshold stay sparse
        self.dense = self.dim <= (ITERATIVE_FROM if self.paulis else DENSE_LIMIT)
        if self.dense:
            self.stack = np.array([to_matrix(o, max_qubits=64) if isinstance(o, PauliString)
                                   else np.asarray(o, dtype=complex) for o in ops])
        else:
            if not self.paulis:
                raise ValueError(f"dense operators above dimension {DENSE_LIMIT} are not supported")
            idx = np.arange(self.dim)
            self.sparse = [sp.csr_matrix((_string_phase(o) * _phase_signs(o.z, o.n_qubits),
                                          (idx ^ o.x, idx)), shape=(self.dim, self.dim))
                           for o in ops]

    def expectations(self, psi: np.ndarray) -> np.ndarray:
        if self.dense:
            return np.real(np.einsum("i,kij,j->k", psi.conj(), self.stack, psi))
        return np.array([np.real(np.vdot(psi, m @ psi)) for m in self.sparse])

    def combination(self, coeffs: np.ndarray):
        if self.dense:
            return np.tensordot(coeffs, self.stack, axes=1)
        out = self.sparse[0] * coeffs[0]
        for c, m in zip(coeffs[1:], self.sparse[1:]):
            out = out + c * m
        return out

    def top_abs(self, coeffs: np.ndarray, start: np.ndarray | None = None
                ) -> tuple[float, np.ndarray]:
        """Eigenpair of ``sum c_i S_i`` with the largest ``|lambda|``; the
        negative end wins only when strictly larger in magnitude."""
        m = self.combination(coeffs)
        if self.dim <= ITERATIVE_FROM:
            vals, vecs = np.linalg.eigh(m)
            if -vals[0] > vals[-1]:
                return float(vals[0]), vecs[:, 0]
            # first column of a degenerate top eigenspace
            top = int(np.searchsorted(vals, vals[-1] - 1e-12 * max(1.0, abs(vals[-1]))))
            return float(vals[-1]), vecs[:, min(top, len(vals) - 1)]
        v0 = None if start is None else np.asarray(start, dtype=complex)
        if not np.any(m.data if sp.issparse(m) else m):
            return 0.0, v0 if v0 is not None else np.eye(self.dim, 1)[:, 0].astype(complex)
        vals, vecs = eigsh(m, k=1, which="LM", v0=v0, tol=1e-10)
        v = vecs[:, 0]
        return float(vals[0]), v / np.linalg.norm(v)


def _family(ops) -> OperatorFamily:
    return ops if isinstance(ops, OperatorFamily) else OperatorFamily(ops)


def _weights(w, k: int, allow_negative: bool = False) -> np.ndarray:
    w = np.ones(k) if w is None else np.asarray(w, dtype=float)
    if w.shape != (k,):
        raise ValueError(f"expected {k} weights, got shape {w.shape}")
    if not allow_negative and np.any(w < 0):
        raise ValueError("weights must be non-negative")
    if not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite")
    return w


def _starts(fam: OperatorFamily, config: SeeSawConfig):
    for r in range(config.restarts):
        yield r, random_pure_state(fam.dim, seed=[config.seed, r])
    if config.witness_restart:
        psi = _witness_state(fam)
        if psi is not None:
            yield "independent-set", psi


def _witness_state(fam: OperatorFamily, w: np.ndarray | None = None) -> np.ndarray | None:
    g = _graph_of(fam)
    if g is None:
        return None
    _, witness = weighted_independence(g, w)
    try:
        return independent_set_state(fam.ops, witness)
    except ValueError:
        return None


def _graph_of(fam: OperatorFamily):
    if fam.paulis:
        return frustration_graph(fam.ops)
    try:
        return anticommutation_graph(list(fam.stack))
    except ValueError:
        return None


def _converged(new: float, old: float, rel_tol: float) -> bool:
    return new - old <= rel_tol * max(1.0, abs(new))


def _run_bilinear(fam, w, psi, config):
    e1 = fam.expectations(psi)
    history = []
    prev = -np.inf
    it = 0
    psi2 = psi
    for it in range(1, config.max_iters + 1):
        lam, psi2 = fam.top_abs(w * e1, start=psi)
        e2 = fam.expectations(psi2)
        f = abs(lam)
        history.append(f)
        psi, psi2, e1 = psi2, psi, e2
        if _converged(f, prev, config.rel_tol):
            break
        prev = f
    return psi, psi2, history, it


def seesaw_bilinear(ops, w=None, config: SeeSawConfig | None = None) -> SeeSawResult:
    """Maximize ``sum w_i <S_i>^2`` by alternating two states.

    Given ``rho1`` the best ``rho2`` for ``f`` is the top-|eigenvalue|
    eigenvector of ``sum_i w_i <S_i>_{rho1} S_i``; the roles then swap.
    ``|f|`` never decreases. Cauchy-Schwarz gives ``|f| <= max(Q(rho1),
    Q(rho2))``, and the better of the two states is returned.
    """
    config = config or SeeSawConfig()
    fam = _family(ops)
    w = _weights(w, fam.k)
    best = None
    for tag, start in _starts(fam, config):
        psi, psi2, history, it = _run_bilinear(fam, w, start, config)
        vals = [float(w @ fam.expectations(s) ** 2) for s in (psi, psi2)]
        pick = int(vals[1] > vals[0])
        value = vals[pick]
        if best is None or value > best.value:
            best = SeeSawResult(value, (psi, psi2)[pick], "bilinear", it,
                                states=(psi, psi2), objective=history[-1],
                                history=history, restart=tag)
    return best


def _run_coefficient(fam, w, psi, config):
    sw = np.sqrt(w)
    history = []
    prev = -np.inf
    c = np.zeros(fam.k)
    it = 0
    for it in range(1, config.max_iters + 1):
        v = sw * fam.expectations(psi)
        norm = np.linalg.norm(v)
        if norm == 0:
            # expectations vanish: any unit c restarts the ascent
            v = sw.copy() if np.any(sw) else np.ones(fam.k)
            norm = np.linalg.norm(v)
        c = v / norm
        lam, psi = fam.top_abs(c * sw, start=psi)
        history.append(lam * lam)
        if _converged(lam * lam, prev, config.rel_tol):
            break
        prev = lam * lam
    return psi, c, history, it


def seesaw_coefficient(ops, w=None, config: SeeSawConfig | None = None) -> SeeSawResult:
    """Alternate ``c ∝ (sqrt(w_i) <S_i>)_i`` and the top-|eigenvalue| state
    of ``sum_i c_i sqrt(w_i) S_i``.

    ``objective`` is ``(sum_i sqrt(w_i) c_i <S_i>)^2``; ``value`` is the exact
    ``sum_i w_i <S_i>^2`` at the final state, which is never smaller.
    """
    config = config or SeeSawConfig()
    fam = _family(ops)
    w = _weights(w, fam.k)
    best = None
    for tag, start in _starts(fam, config):
        psi, c, history, it = _run_coefficient(fam, w, start, config)
        value = float(w @ fam.expectations(psi) ** 2)
        if best is None or value > best.value:
            best = SeeSawResult(value, psi, "coefficient", it, coefficients=c,
                                states=(psi,), objective=history[-1],
                                history=history, restart=tag)
    return best


def signed_seesaw(ops, w, config: SeeSawConfig | None = None) -> SeeSawResult:
    """Local ascent of ``sum_i w_i <S_i>^2`` for weights of any sign.

    Each step maps ``psi`` to the normalized ``(sum_i w_i <S_i> S_i + c) psi``
    with ``c = 3 sum |w_i|``. The shift makes the quartic convex on the unit
    ball, so every step is an ascent step. The value is evaluated exactly on
    the final state.
    """
    config = config or SeeSawConfig()
    fam = _family(ops)
    w = _weights(w, fam.k, allow_negative=True)
    shift = 3 * float(np.abs(w).sum())
    best = None
    starts = SeeSawConfig(config.restarts, config.max_iters, config.rel_tol,
                          config.seed, witness_restart=False)
    for tag, psi in _starts(fam, starts):
        history = []
        prev = -np.inf
        it = 0
        for it in range(1, config.max_iters + 1):
            e = fam.expectations(psi)
            value = float(w @ e**2)
            history.append(value)
            if _converged(value, prev, config.rel_tol):
                break
            prev = value
            m = fam.combination(w * e)
            psi = m @ psi + shift * psi
            psi = psi / np.linalg.norm(psi)
        value = float(w @ fam.expectations(psi) ** 2)
        if best is None or value > best.value:
            best = SeeSawResult(value, psi, "signed", it, history=history, restart=tag)
    return best


def q_lower(ops, w=None, config: SeeSawConfig | None = None) -> LowerBound:
    """Best attained value among both see-saw methods and the
    independent-set witness state."""
    config = config or SeeSawConfig()
    fam = _family(ops)
    w = _weights(w, fam.k)
    runs = {"bilinear": seesaw_bilinear(fam, w, config),
            "coefficient": seesaw_coefficient(fam, w, config)}
    method, run = max(runs.items(), key=lambda kv: kv[1].value)
    witness = _witness_state(fam, w)
    wvalue = -np.inf
    if witness is not None:
        wvalue = float(w @ fam.expectations(witness) ** 2)
    details = {name: r.value for name, r in runs.items()}
    details["independent-set"] = None if witness is None else wvalue
    if run.value > wvalue + 1e-9:
        return LowerBound(run.value, "see-saw", run.state, {**details, "method": method})
    return LowerBound(wvalue, "independent-set", witness, details)


def weighted_square_sum(ops, w, state: np.ndarray) -> float:
    """``sum_i w_i <S_i>^2`` for a pure state vector or a density matrix."""
    fam = _family(ops)
    w = _weights(w, fam.k, allow_negative=True)
    state = np.asarray(state)
    if state.ndim == 1:
        e = fam.expectations(state)
    elif fam.dense:
        e = np.real(np.einsum("ij,kji->k", state, fam.stack))
    else:
        e = np.array([np.real(m.multiply(state.T).sum()) for m in fam.sparse])
    return float(w @ e**2)
