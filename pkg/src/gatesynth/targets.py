"""Built-in target unitaries and the matrix-file loader.

Matrix file format (text): first significant line is the order N, followed
by N lines of N whitespace-separated complex entries written as "re,im"
decimal pairs, row-major.  Lines starting with '#' are ignored.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .gates import PAULI_X, PAULI_Z, embed_in_register
from .linalg import identity, is_unitary


class MatrixFileError(ValueError):
    """Base class for matrix-file loading failures."""


class MatrixParseError(MatrixFileError):
    """Malformed header or entry."""


class NonSquareError(MatrixFileError):
    """Row or column count does not match the declared order."""


class DimensionError(MatrixFileError):
    """Order is not a power of two."""


class NotUnitaryError(MatrixFileError):
    """Loaded matrix fails the unitarity check."""


def toffoli() -> np.ndarray:
    """Doubly-controlled X on 3 qubits: swaps the basis states with both
    low qubits set (indices 3 and 7)."""
    m = identity(8)
    m[[3, 7]] = m[[7, 3]]
    return m


def grover_diffusion(n: int) -> np.ndarray:
    """Reflection about the uniform superposition, 2|s><s| - I."""
    if n < 1:
        raise ValueError("n must be >= 1")
    dim = 1 << n
    return np.full((dim, dim), 2.0 / dim, dtype=complex) - identity(dim)


def qft(n: int) -> np.ndarray:
    """Discrete Fourier matrix F[j, k] = omega^(j*k) / sqrt(N)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    dim = 1 << n
    js = np.arange(dim)
    omega = np.exp(2j * np.pi / dim)
    return omega ** np.outer(js, js) / np.sqrt(dim)


def teleport_sender() -> np.ndarray:
    """Bell-basis change on qubits 1-2 of a 3-qubit register: CNOT with
    control qubit 1 and target qubit 2, then H on qubit 1."""
    hadamard = (PAULI_X + PAULI_Z) / np.sqrt(2.0)
    cnot = np.zeros((8, 8), dtype=complex)
    for s in range(8):
        cnot[s ^ 2 if s & 1 else s, s] = 1.0
    return embed_in_register(hadamard, 0, 3) @ cnot


BUILTIN_TARGETS = {
    "toffoli": (lambda n: toffoli(), 3),
    "grover_diffusion": (grover_diffusion, None),
    "qft": (qft, None),
    "teleport_sender": (lambda n: teleport_sender(), 3),
}


@dataclass(frozen=True)
class TargetSpec:
    """A builtin target name or a matrix file path, plus the qubit count."""

    kind: str  # "builtin" | "file"
    name: str
    n: int

    def resolve(self) -> np.ndarray:
        if self.kind == "builtin":
            factory, fixed_n = BUILTIN_TARGETS[self.name]
            if fixed_n is not None and self.n != fixed_n:
                raise ValueError(f"target {self.name!r} is fixed at {fixed_n} qubits")
            return factory(self.n)
        if self.kind == "file":
            m = load_matrix_file(self.name)
            if m.shape[0] != 1 << self.n:
                raise ValueError(
                    f"matrix file {self.name!r} has order {m.shape[0]}, "
                    f"expected {1 << self.n} for {self.n} qubits"
                )
            return m
        raise ValueError(f"unknown target kind {self.kind!r}")


def _parse_entry(token: str, line_no: int) -> complex:
    parts = token.split(",")
    if len(parts) != 2:
        raise MatrixParseError(f"line {line_no}: entry {token!r} is not 're,im'")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise MatrixParseError(f"line {line_no}: entry {token!r} is not numeric") from None


def load_matrix_file(path: str, tol: float = 1e-8) -> np.ndarray:
    """Read, validate and return a unitary of power-of-two order."""
    rows: list[list[complex]] = []
    order: Optional[int] = None
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if order is None:
                try:
                    order = int(line)
                except ValueError:
                    raise MatrixParseError(
                        f"line {line_no}: expected the matrix order, got {line!r}"
                    ) from None
                if order < 1:
                    raise MatrixParseError(f"line {line_no}: order must be >= 1")
                continue
            tokens = line.split()
            if len(tokens) != order:
                raise NonSquareError(
                    f"line {line_no}: row has {len(tokens)} entries, expected {order}"
                )
            rows.append([_parse_entry(t, line_no) for t in tokens])
    if order is None:
        raise MatrixParseError("empty matrix file")
    if len(rows) != order:
        raise NonSquareError(f"found {len(rows)} rows, expected {order}")
    if order & (order - 1) != 0:
        raise DimensionError(f"order {order} is not a power of two")
    m = np.array(rows, dtype=complex)
    if not is_unitary(m, tol):
        raise NotUnitaryError(f"matrix in {path!r} is not unitary within {tol}")
    return m


def save_matrix_file(path: str, m: np.ndarray, comment: str = "") -> None:
    """Write a matrix in the loader's format (full float precision)."""
    with open(path, "w", encoding="utf-8") as fh:
        if comment:
            for line in comment.splitlines():
                fh.write(f"# {line}\n")
        fh.write(f"{m.shape[0]}\n")
        for row in m:
            fh.write(" ".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in row) + "\n")
