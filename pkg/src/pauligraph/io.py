"""Text and JSON formats used by the command line.

* Pauli list: one word per line, e.g. ``XZI`` or ``-YYZ``. A string on
  zero qubits (the scalar identity) is written ``1``.
* Hamiltonian: one term per line, ``<coefficient> <word>``.
* Graph: JSON ``{"n": int, "edges": [[i, j], ...], "weights": [...]}``
  with ``weights`` optional.

Blank lines and anything after ``#`` are ignored in the text formats.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from .graphs import Graph
from .pauli import PauliParseError, PauliString, parse_pauli


class InputFormatError(ValueError):
    """Malformed input file; the message names the line."""


def _lines(text: str) -> Iterable[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_pauli_list(text: str) -> list[PauliString]:
    out = []
    for lineno, line in _lines(text):
        if line in ("1", "+1", "-1"):
            out.append(PauliString(0, sign=-1 if line[0] == "-" else 1))
            continue
        try:
            out.append(parse_pauli(line))
        except PauliParseError as exc:
            raise InputFormatError(f"line {lineno}: {exc}") from exc
    if not out:
        raise InputFormatError("no Pauli strings found")
    if len({p.n_qubits for p in out}) > 1:
        raise InputFormatError("Pauli strings have different lengths")
    return out


def format_pauli_list(strings: Iterable[PauliString]) -> str:
    return "".join(f"{s.label if s.n_qubits else ('-1' if s.sign < 0 else '1')}\n"
                   for s in strings)


def parse_hamiltonian(text: str) -> list[tuple[float, PauliString]]:
    terms = []
    for lineno, line in _lines(text):
        parts = line.split()
        if len(parts) != 2:
            raise InputFormatError(f"line {lineno}: expected '<coefficient> <word>'")
        try:
            coef = float(parts[0])
        except ValueError as exc:
            raise InputFormatError(f"line {lineno}: bad coefficient {parts[0]!r}") from exc
        try:
            terms.append((coef, parse_pauli(parts[1])))
        except PauliParseError as exc:
            raise InputFormatError(f"line {lineno}: {exc}") from exc
    if not terms:
        raise InputFormatError("no Hamiltonian terms found")
    if len({s.n_qubits for _, s in terms}) > 1:
        raise InputFormatError("Hamiltonian terms act on different numbers of qubits")
    return terms


def format_hamiltonian(terms: Iterable[tuple[float, PauliString]]) -> str:
    return "".join(f"{a!r} {s.label}\n" for a, s in terms)


def parse_graph(text: str) -> Graph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"invalid graph JSON: {exc}") from exc
    if not isinstance(data, dict) or "n" not in data or "edges" not in data:
        raise InputFormatError("graph JSON needs 'n' and 'edges'")
    try:
        return Graph.from_dict(data)
    except (ValueError, TypeError) as exc:
        raise InputFormatError(f"invalid graph: {exc}") from exc


def read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc}") from exc


def load_graph(path) -> Graph:
    return parse_graph(read_text(path))


def load_paulis(path) -> list[PauliString]:
    return parse_pauli_list(read_text(path))


def load_hamiltonian(path) -> list[tuple[float, PauliString]]:
    return parse_hamiltonian(read_text(path))


def dumps(data) -> str:
    """Stable JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2) + "\n"
