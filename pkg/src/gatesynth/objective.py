"""Phase-invariant correctness and the combined correctness/cost objective."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import (
    DecodedGate,
    SearchSpace,
    circuit_cost,
    circuit_unitary,
    decode,
    decode_gene,
    gate_cost,
    gate_matrix,
)


@dataclass(frozen=True)
class ObjectiveWeights:
    """Correctness weight alpha and cost weight beta; they must sum to 1."""

    alpha: float = 0.9
    beta: float = 0.1

    def __post_init__(self) -> None:
        if not (0.0 <= self.alpha <= 1.0 and 0.0 <= self.beta <= 1.0):
            raise ValueError("weights must lie in [0, 1]")
        if abs(self.alpha + self.beta - 1.0) > 1e-9:
            raise ValueError(f"alpha + beta must equal 1, got {self.alpha + self.beta}")


@dataclass(frozen=True)
class EvaluationResult:
    y: float
    c: float
    cost: int
    circuit: tuple[DecodedGate, ...]


def correctness(u_f: np.ndarray, u_g: np.ndarray) -> float:
    """|Tr(u_g @ u_f†)| / N, invariant under a global phase of either side."""
    if u_f.shape != u_g.shape:
        raise ValueError(f"dimension mismatch: {u_f.shape} vs {u_g.shape}")
    # vdot(a, b) = sum(conj(a) * b) = Tr(a† b), and Tr(u_g u_f†) = Tr(u_f† u_g)
    return float(abs(np.vdot(u_f, u_g))) / u_f.shape[0]


def objective(c: float, cost: int, weights: ObjectiveWeights = ObjectiveWeights()) -> float:
    """y = |1 - (alpha*c + beta/cost)|; the cost term is 0 for empty circuits."""
    if cost == 0:
        return abs(1.0 - weights.alpha * c)
    return abs(1.0 - (weights.alpha * c + weights.beta / cost))


def evaluate(
    genotype: np.ndarray,
    target: np.ndarray,
    space: SearchSpace,
    weights: ObjectiveWeights = ObjectiveWeights(),
) -> EvaluationResult:
    """Decode, build the circuit unitary, and score it against the target."""
    circuit = decode(genotype, space)
    u_f = circuit_unitary(circuit, space.n_qubits)
    c = correctness(u_f, target)
    cost = circuit_cost(circuit)
    return EvaluationResult(y=objective(c, cost, weights), c=c, cost=cost, circuit=circuit)


class Evaluator:
    """Caching evaluator for the optimizer's inner loop.

    Per-gene decoding, cost and full-register matrices are memoized under a
    normalized key (junk fields of no-op and non-rotation genes collapse),
    so repeated genotype evaluation reduces to dict lookups plus matrix
    products.  Results are bit-identical to :func:`evaluate`.
    """

    def __init__(
        self,
        target: np.ndarray,
        space: SearchSpace,
        weights: ObjectiveWeights = ObjectiveWeights(),
        cache_limit: int = 150_000,
    ):
        n = space.n_qubits
        if target.shape != (1 << n, 1 << n):
            raise ValueError(
                f"target of order {target.shape} does not match {n} qubits"
            )
        self.target = target
        self.space = space
        self.weights = weights
        self.cache_limit = cache_limit
        self._cache: dict[int, tuple[DecodedGate, int, np.ndarray | None]] = {}
        # per gate id: does the variant consume the control / angle field
        needs_control = [False]
        is_rotation = [False]
        for entry in space.gate_set:
            needs_control.append(entry.needs_control)
            is_rotation.append(entry.gate.is_rotation)
        self._needs_control = needs_control
        self._is_rotation = is_rotation
        self._identity = np.eye(1 << n, dtype=complex)
        self._n = n
        self._size = len(space.gate_set)
        self._grid_count = space.grid.count
        self._noop_entry = (decode_gene((0, 0, 0, 0), space), 0, None)

    def _build(self, gid: int, target: int, control: int, angle_idx: int):
        g = decode_gene((gid, target, control, angle_idx), self.space)
        mat = None if g.kind == "noop" else gate_matrix(g, self.space.n_qubits)
        return (g, gate_cost(g), mat)

    def evaluate(self, genotype: np.ndarray) -> EvaluationResult:
        vals = np.asarray(genotype).ravel().tolist()
        cache = self._cache
        needs_control = self._needs_control
        is_rotation = self._is_rotation
        n, size, grid_count = self._n, self._size, self._grid_count
        key_stride = (n + 1) * grid_count
        u = self._identity
        cost = 0
        circuit = []
        for j in range(0, len(vals), 4):
            gid, target, control, angle_idx = vals[j], vals[j + 1], vals[j + 2], vals[j + 3]
            in_bounds = (
                0 <= gid <= size
                and 0 <= control <= n
                and 0 <= angle_idx < grid_count
                and (0 <= target <= n if gid == 0 else 1 <= target <= n)
            )
            if not in_bounds:
                decode_gene((gid, target, control, angle_idx), self.space)  # raises
            if gid == 0 or (needs_control[gid] and (control == 0 or control == target)):
                entry = self._noop_entry
            else:
                ctl = control if needs_control[gid] else 0
                ang = angle_idx if is_rotation[gid] else 0
                key = (gid * (n + 1) + target) * key_stride + ctl * grid_count + ang
                entry = cache.get(key)
                if entry is None:
                    entry = self._build(gid, target, ctl, ang)
                    if len(cache) < self.cache_limit:
                        cache[key] = entry
            circuit.append(entry[0])
            cost += entry[1]
            if entry[2] is not None:
                u = entry[2] @ u
        c = correctness(u, self.target)
        return EvaluationResult(
            y=objective(c, cost, self.weights), c=c, cost=cost, circuit=tuple(circuit)
        )

    __call__ = evaluate
