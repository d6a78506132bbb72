"""Elementary 2x2 gates and controlled-gate matrix construction.

The controlled builders start from an identity matrix of order 2^(d+1),
d = |control - target|, and overwrite the four block entries per affected
basis pair by direct index arithmetic: the single-control builder loops
over 2^(d-1) pairs (O(N) writes), the multi-control builder touches one
pair (O(1)).

Convention trap, pinned by the oracle-equivalence tests: the builders'
index arithmetic reads their ``target`` argument as the position of the
bit that conditions the gate, reads ``control`` as the bit the 2x2 block
acts on, and addresses that block with the bit-1 state first.  Callers
that want a standard controlled-u therefore pass the placement swapped
and the block reversed; see ``circuit.gate_matrix``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .linalg import identity, kron

_SQ2 = 1.0 / np.sqrt(2.0)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SQRT_NOT = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex)


def _x_matrix(theta: float) -> np.ndarray:
    return PAULI_X


def _y_matrix(theta: float) -> np.ndarray:
    return PAULI_Y


def _z_matrix(theta: float) -> np.ndarray:
    return PAULI_Z


def _v_matrix(theta: float) -> np.ndarray:
    return SQRT_NOT


_SQRT_NOT_DG = SQRT_NOT.conj().T


def _vdg_matrix(theta: float) -> np.ndarray:
    return _SQRT_NOT_DG


def _rx_matrix(theta: float) -> np.ndarray:
    return np.cos(theta / 2) * np.eye(2) - 1j * np.sin(theta / 2) * PAULI_X


def _ry_matrix(theta: float) -> np.ndarray:
    return np.cos(theta / 2) * np.eye(2) - 1j * np.sin(theta / 2) * PAULI_Y


def _rz_matrix(theta: float) -> np.ndarray:
    return np.cos(theta / 2) * np.eye(2) - 1j * np.sin(theta / 2) * PAULI_Z


@dataclass(frozen=True)
class ElementaryGate:
    """A named 2x2 gate; ``matrix_fn`` maps an angle to its matrix.

    Non-rotation gates ignore the angle.
    """

    name: str
    matrix_fn: Callable[[float], np.ndarray] = field(compare=False)
    is_rotation: bool = False

    def matrix(self, theta: float = 0.0) -> np.ndarray:
        return self.matrix_fn(theta)


ELEMENTARY_GATES: dict[str, ElementaryGate] = {
    g.name: g
    for g in [
        ElementaryGate("X", _x_matrix),
        ElementaryGate("Y", _y_matrix),
        ElementaryGate("Z", _z_matrix),
        ElementaryGate("V", _v_matrix),
        ElementaryGate("Vdg", _vdg_matrix),
        ElementaryGate("Rx", _rx_matrix, is_rotation=True),
        ElementaryGate("Ry", _ry_matrix, is_rotation=True),
        ElementaryGate("Rz", _rz_matrix, is_rotation=True),
    ]
}


def single_gate_matrix(gate: ElementaryGate | str, theta: float = 0.0) -> np.ndarray:
    """2x2 matrix of an elementary gate, looked up by name if needed."""
    if isinstance(gate, str):
        try:
            gate = ELEMENTARY_GATES[gate]
        except KeyError:
            raise ValueError(f"unknown gate name: {gate!r}") from None
    return gate.matrix(theta)


@dataclass(frozen=True)
class LocalPlacement:
    """Builder arguments for a controlled block on qubits 0..d."""

    target: int
    control: int

    @property
    def d(self) -> int:
        return abs(self.control - self.target)


def _check_placement(p: LocalPlacement) -> None:
    if p.d == 0:
        raise ValueError("invalid placement: control equals target (d = 0)")
    if min(p.target, p.control) != 0:
        raise ValueError("placement not normalized: min(target, control) must be 0")


def block_write_positions(p: LocalPlacement, multi: bool) -> list[tuple[int, int]]:
    """Index pairs (i, j) whose 2x2 blocks the builders overwrite."""
    t = 1 << p.target
    c = t + (1 << p.control)
    m = (1 << (p.d - 1)) - 1
    if multi:
        return [(c + 2 * m, t + 2 * m)]
    return [(c + 2 * k, t + 2 * k) for k in range(m + 1)]


def _write_blocks(u: np.ndarray, p: LocalPlacement, multi: bool) -> np.ndarray:
    _check_placement(p)
    out = identity(1 << (p.d + 1))
    for i, j in block_write_positions(p, multi):
        out[i, i] = u[0, 0]
        out[i, j] = u[0, 1]
        out[j, i] = u[1, 0]
        out[j, j] = u[1, 1]
    return out


def build_single_control(u: np.ndarray, placement: LocalPlacement) -> np.ndarray:
    """Controlled-gate matrix of order 2^(d+1), one conditioning qubit.

    Writes exactly 4 * 2^(d-1) entries of the identity.
    """
    return _write_blocks(u, placement, multi=False)


def build_multi_control(u: np.ndarray, placement: LocalPlacement) -> np.ndarray:
    """Controlled-gate matrix where every qubit strictly between the
    placement endpoints conditions the gate as well.

    Writes exactly 4 entries regardless of d.
    """
    return _write_blocks(u, placement, multi=True)


def embed_in_register(local: np.ndarray, low_qubit: int, n: int) -> np.ndarray:
    """Expand a 2^w-order block to the full 2^n register.

    The block occupies qubits low_qubit .. low_qubit + w - 1; the rest of
    the register is padded with identities (low qubits are the low-order
    index bits).
    """
    dim = local.shape[0]
    w = dim.bit_length() - 1
    if 1 << w != dim:
        raise ValueError(f"local block order {dim} is not a power of two")
    if low_qubit < 0 or low_qubit + w > n:
        raise ValueError(
            f"placement outside register: qubits {low_qubit}..{low_qubit + w - 1} "
            f"do not fit in {n}"
        )
    out = local
    if low_qubit > 0:
        out = kron(out, identity(1 << low_qubit))
    if low_qubit + w < n:
        out = kron(identity(1 << (n - low_qubit - w)), out)
    if out is local:  # block fills the register; never alias the caller's array
        out = np.array(local, dtype=complex)
    return out
