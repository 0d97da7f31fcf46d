"""Pauli strings in symplectic bit form.

A string on ``n`` qubits is stored as two integer bit masks ``x`` and ``z``
plus a sign. Qubit 0 is the leftmost character and the most significant
tensor factor, so the mask bit for qubit ``k`` is ``1 << (n - 1 - k)``. With
that layout the masks index computational basis states directly, which is
what the matrix-free routines rely on.

The operator encoded by ``(x, z, sign)`` is

    sign * i**|x & z| * prod_k X**x_k Z**z_k

which is Hermitian for every bit pattern (``Y = iXZ``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DENSE_QUBIT_LIMIT = 12

_CHAR_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_CHAR = {v: k for k, v in _CHAR_BITS.items()}
_PHASES = (1, 1j, -1, -1j)


class PauliParseError(ValueError):
    """Raised for malformed Pauli text."""

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class DimensionGuardError(ValueError):
    """Raised when a dense construction would exceed the configured size."""


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class PauliString:
    """Hermitian Pauli word with a sign in {+1, -1}."""

    n_qubits: int
    x: int = 0
    z: int = 0
    sign: int = 1

    def __post_init__(self):
        if self.n_qubits < 0:
            raise ValueError("n_qubits must be non-negative")
        limit = 1 << self.n_qubits
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise ValueError("bit masks do not fit in n_qubits")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits)

    @classmethod
    def from_label(cls, text: str) -> "PauliString":
        return parse_pauli(text)

    @classmethod
    def from_bits(cls, x_bits: Sequence[int], z_bits: Sequence[int],
                  sign: int = 1) -> "PauliString":
        if len(x_bits) != len(z_bits):
            raise ValueError("x_bits and z_bits differ in length")
        x = z = 0
        for xb, zb in zip(x_bits, z_bits):
            x = (x << 1) | (int(xb) & 1)
            z = (z << 1) | (int(zb) & 1)
        return cls(len(x_bits), x, z, sign)

    @property
    def x_bits(self) -> tuple[int, ...]:
        n = self.n_qubits
        return tuple((self.x >> (n - 1 - k)) & 1 for k in range(n))

    @property
    def z_bits(self) -> tuple[int, ...]:
        n = self.n_qubits
        return tuple((self.z >> (n - 1 - k)) & 1 for k in range(n))

    @property
    def label(self) -> str:
        chars = "".join(_BITS_CHAR[b] for b in zip(self.x_bits, self.z_bits))
        return ("-" if self.sign < 0 else "") + chars

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def __str__(self) -> str:
        return self.label or ("-1" if self.sign < 0 else "1")

    def __neg__(self) -> "PauliString":
        return PauliString(self.n_qubits, self.x, self.z, -self.sign)

    def tensor(self, other: "PauliString") -> "PauliString":
        """Return ``self ⊗ other`` (``self`` on the leftmost qubits)."""
        return PauliString(
            self.n_qubits + other.n_qubits,
            (self.x << other.n_qubits) | other.x,
            (self.z << other.n_qubits) | other.z,
            self.sign * other.sign,
        )

    def __matmul__(self, other: "PauliString") -> "PauliString":
        return self.tensor(other)

    def commutes(self, other: "PauliString") -> bool:
        return commutes(self, other)

    def to_matrix(self, max_qubits: int = DENSE_QUBIT_LIMIT) -> np.ndarray:
        return to_matrix(self, max_qubits=max_qubits)

    def apply(self, v: np.ndarray) -> np.ndarray:
        """Matrix-free action on a state vector (or columns of a 2-D array)."""
        return _apply_string(self, np.asarray(v))


def parse_pauli(text: str) -> PauliString:
    """Parse a word such as ``"XZI"`` or ``"-YZZ"``.

    Raises
    ------
    PauliParseError
        On an empty word or a character outside ``IXYZ``; the error carries
        the 0-based character position.
    """
    s = text.strip()
    sign = 1
    offset = len(text) - len(text.lstrip())
    body = s
    if s[:1] in "+-" and s:
        sign = -1 if s[0] == "-" else 1
        body = s[1:]
        offset += 1
    if not body:
        raise PauliParseError(f"empty Pauli word in {text!r}", offset)
    x = z = 0
    for k, ch in enumerate(body):
        bits = _CHAR_BITS.get(ch.upper())
        if bits is None:
            raise PauliParseError(
                f"invalid character {ch!r} at position {offset + k} in {text!r}",
                offset + k,
            )
        x = (x << 1) | bits[0]
        z = (z << 1) | bits[1]
    return PauliString(len(body), x, z, sign)


def _check_same_length(p: PauliString, q: PauliString) -> None:
    if p.n_qubits != q.n_qubits:
        raise ValueError(
            f"length mismatch: {p.n_qubits} vs {q.n_qubits} qubits")


def symplectic_product(p: PauliString, q: PauliString) -> int:
    """``<x_p, z_q> + <x_q, z_p>`` mod 2."""
    _check_same_length(p, q)
    return (_popcount(p.x & q.z) + _popcount(q.x & p.z)) & 1


def commutes(p: PauliString, q: PauliString) -> bool:
    return symplectic_product(p, q) == 0


def anticommutes(p: PauliString, q: PauliString) -> bool:
    return symplectic_product(p, q) == 1


def multiply(p: PauliString, q: PauliString) -> tuple[PauliString, complex]:
    """Matrix product ``p @ q`` as ``(string, phase)``.

    The returned string carries sign +1 and ``phase`` is one of
    ``1, 1j, -1, -1j`` so that ``phase * to_matrix(string)`` equals
    ``to_matrix(p) @ to_matrix(q)``.
    """
    _check_same_length(p, q)
    xr, zr = p.x ^ q.x, p.z ^ q.z
    k = (_popcount(p.x & p.z) + _popcount(q.x & q.z) - _popcount(xr & zr)
         + 2 * _popcount(p.z & q.x))
    if p.sign * q.sign < 0:
        k += 2
    return PauliString(p.n_qubits, xr, zr), _PHASES[k % 4]


def _phase_signs(zmask: int, n_qubits: int) -> np.ndarray:
    idx = np.arange(1 << n_qubits, dtype=np.int64)
    parity = np.bitwise_count(idx & zmask) & 1
    return 1 - 2 * parity.astype(np.int8)


def _string_phase(p: PauliString) -> complex:
    return p.sign * _PHASES[_popcount(p.x & p.z) % 4]


def to_matrix(p: PauliString, max_qubits: int = DENSE_QUBIT_LIMIT) -> np.ndarray:
    """Dense ``2**n x 2**n`` matrix of ``p``."""
    n = p.n_qubits
    if n > max_qubits:
        raise DimensionGuardError(
            f"{n} qubits exceeds the dense limit of {max_qubits}")
    dim = 1 << n
    cols = np.arange(dim, dtype=np.int64)
    m = np.zeros((dim, dim), dtype=complex)
    m[cols ^ p.x, cols] = _string_phase(p) * _phase_signs(p.z, n)
    return m


def _apply_string(p: PauliString, v: np.ndarray) -> np.ndarray:
    dim = 1 << p.n_qubits
    if v.shape[0] != dim:
        raise ValueError(f"vector length {v.shape[0]} != {dim}")
    signs = _phase_signs(p.z, p.n_qubits)
    if v.ndim == 2:
        signs = signs[:, None]
    w = _string_phase(p) * (signs * v)
    return w[np.arange(dim) ^ p.x]


def tensor_all(strings: Iterable[PauliString]) -> PauliString:
    out = PauliString(0)
    for s in strings:
        out = out.tensor(s)
    return out


class PauliSumOperator:
    """Real-weighted sum of Pauli strings with a matrix-free ``matvec``."""

    def __init__(self, terms: Sequence[tuple[float, PauliString]]):
        terms = [(float(a), s) for a, s in terms]
        if not terms:
            raise ValueError("PauliSumOperator needs at least one term")
        n = terms[0][1].n_qubits
        if any(s.n_qubits != n for _, s in terms):
            raise ValueError("all terms must act on the same number of qubits")
        self.terms = tuple(terms)
        self.n_qubits = n
        self.dim = 1 << n
        # Terms sharing an x mask act on the same permutation; fold them.
        groups: dict[int, np.ndarray] = {}
        for a, s in terms:
            diag = a * _string_phase(s) * _phase_signs(s.z, n)
            groups[s.x] = groups.get(s.x, 0) + diag
        self._groups = [(xm, d) for xm, d in groups.items()]
        self._index = np.arange(self.dim, dtype=np.int64)

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([a for a, _ in self.terms])

    @property
    def strings(self) -> list[PauliString]:
        return [s for _, s in self.terms]

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v)
        if v.shape[0] != self.dim:
            raise ValueError(f"vector length {v.shape[0]} != {self.dim}")
        out = np.zeros(v.shape, dtype=np.result_type(v, complex))
        for xm, diag in self._groups:
            d = diag[:, None] if v.ndim == 2 else diag
            out += (d * v)[self._index ^ xm]
        return out

    __call__ = matvec

    def to_matrix(self, max_qubits: int = DENSE_QUBIT_LIMIT) -> np.ndarray:
        if self.n_qubits > max_qubits:
            raise DimensionGuardError(
                f"{self.n_qubits} qubits exceeds the dense limit of {max_qubits}")
        m = np.zeros((self.dim, self.dim), dtype=complex)
        for xm, diag in self._groups:
            m[self._index ^ xm, self._index] += diag
        return m

    def __repr__(self) -> str:
        body = " + ".join(f"{a:g}*{s}" for a, s in self.terms[:4])
        more = " + ..." if len(self.terms) > 4 else ""
        return f"PauliSumOperator({body}{more})"


def matvec(h: PauliSumOperator, v: np.ndarray) -> np.ndarray:
    return h.matvec(v)


def anticommuting_family(r: int) -> list[PauliString]:
    """``r`` pairwise anticommuting strings on ``max(1, ceil((r-1)/2))`` qubits.

    Jordan-Wigner ladder: ``Z..Z X I..I`` and ``Z..Z Y I..I`` for every head
    position, followed by the all-Z cap when ``r`` is odd.
    """
    if r < 1:
        raise ValueError("r must be at least 1")
    m = max(1, r // 2)
    out = []
    for k in range(m):
        tail = m - 1 - k
        zhead = ((1 << k) - 1) << (m - k)
        head = 1 << tail
        out.append(PauliString(m, head, zhead))
        out.append(PauliString(m, head, zhead | head))
    out.append(PauliString(m, 0, (1 << m) - 1))
    return out[:r]
