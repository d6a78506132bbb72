"""Integer-string circuit genotypes: decoding, unitaries, costs, text tables.

A genotype is a flat int array, four fields per gate slot:

    gate_id   1-based index into the gate set, 0 = no-op
    target    1-based qubit label
    control   1-based qubit label, 0 = unused
    angle_idx index into the angle grid (rotation gates only)

A controlled-variant gene whose control is 0 or equal to its target decays
to a no-op, which renders as an all-zero table row.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np

from .gates import (
    ELEMENTARY_GATES,
    ElementaryGate,
    LocalPlacement,
    build_multi_control,
    build_single_control,
    embed_in_register,
)
from .linalg import identity

SINGLE = "single"
CONTROL = "control"
MULTICONTROL = "multicontrol"
NOOP = "noop"
VARIANTS = (SINGLE, CONTROL, MULTICONTROL)

FIELDS_PER_GATE = 4


class MalformedGenotypeError(ValueError):
    """A gene field is outside its legal range."""


class TableParseError(ValueError):
    """A circuit table row cannot be parsed; message carries the line number."""


class Gene(NamedTuple):
    gate_id: int
    target: int
    control: int
    angle_idx: int


@dataclass(frozen=True)
class GateSetEntry:
    gate: ElementaryGate
    variant: str

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown gate variant: {self.variant!r}")

    @property
    def needs_control(self) -> bool:
        return self.variant != SINGLE


class GateSet:
    """Ordered gate templates; genotype gate ids index it 1-based."""

    def __init__(self, entries: Iterable[GateSetEntry]):
        self.entries = tuple(entries)
        if not self.entries:
            raise ValueError("gate set must not be empty")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def entry(self, gate_id: int) -> GateSetEntry:
        if not 1 <= gate_id <= len(self.entries):
            raise IndexError(f"gate id {gate_id} outside 1..{len(self.entries)}")
        return self.entries[gate_id - 1]

    @classmethod
    def default(cls) -> "GateSet":
        """X, Y, Z, V, Vdg, Rx, Ry, Rz as singles and controlled, plus a
        multi-controlled X."""
        bases = ["X", "Y", "Z", "V", "Vdg", "Rx", "Ry", "Rz"]
        entries = [GateSetEntry(ELEMENTARY_GATES[b], SINGLE) for b in bases]
        entries += [GateSetEntry(ELEMENTARY_GATES[b], CONTROL) for b in bases]
        entries.append(GateSetEntry(ELEMENTARY_GATES["X"], MULTICONTROL))
        return cls(entries)

    @classmethod
    def parse(cls, text: str) -> "GateSet":
        """Parse 'variant:Name' tokens, e.g. 'control:X,single:V,single:Vdg'."""
        if text.strip() == "default":
            return cls.default()
        entries = []
        for token in text.split(","):
            token = token.strip()
            if not token:
                continue
            try:
                variant, name = token.split(":")
            except ValueError:
                raise ValueError(f"bad gate set token {token!r}; expected variant:Name") from None
            if variant not in VARIANTS:
                raise ValueError(f"unknown gate variant {variant!r} in {token!r}")
            if name not in ELEMENTARY_GATES:
                raise ValueError(f"unknown gate name {name!r} in {token!r}")
            entries.append(GateSetEntry(ELEMENTARY_GATES[name], variant))
        return cls(entries)


TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class AngleGrid:
    """Quantized rotation angles value(k) = k * step over [0, 2*pi]."""

    step: float
    count: int

    def value(self, k: int) -> float:
        return k * self.step

    @classmethod
    def from_step(cls, step: float) -> "AngleGrid":
        if step <= 0:
            raise ValueError("angle step must be positive")
        return cls(step=step, count=int(np.floor(TWO_PI / step + 1e-9)) + 1)

    @classmethod
    def default(cls) -> "AngleGrid":
        return cls.from_step(0.125 * np.pi)  # 17 values, 0 .. 2*pi

    @classmethod
    def h2(cls) -> "AngleGrid":
        return cls.from_step(0.005)  # 1257 values


@dataclass(frozen=True)
class SearchSpace:
    """Everything needed to interpret a genotype: register size, gate set,
    angle grid and the fixed gene-slot count."""

    n_qubits: int
    max_gates: int
    gate_set: GateSet
    grid: AngleGrid

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be >= 1")
        if self.max_gates < 1:
            raise ValueError("max_gates must be >= 1")

    @property
    def num_variables(self) -> int:
        return FIELDS_PER_GATE * self.max_gates

    def field_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Inclusive (lo, hi) per genotype variable."""
        lo = np.tile([0, 1, 0, 0], self.max_gates)
        hi = np.tile(
            [len(self.gate_set), self.n_qubits, self.n_qubits, self.grid.count - 1],
            self.max_gates,
        )
        return lo.astype(np.int64), hi.astype(np.int64)


@dataclass(frozen=True)
class DecodedGate:
    """One placed gate: variant kind, elementary gate, 0-based qubits."""

    kind: str
    gate: Optional[ElementaryGate]
    target: Optional[int]
    control: Optional[int]
    angle_idx: int
    theta: float


NOOP_GATE = DecodedGate(NOOP, None, None, None, 0, 0.0)


def genes(genotype: np.ndarray) -> list[Gene]:
    """View a flat genotype as Gene quadruples."""
    arr = np.asarray(genotype).reshape(-1, FIELDS_PER_GATE)
    return [Gene(*(int(x) for x in row)) for row in arr]


def decode_gene(gene: Sequence[int], space: SearchSpace) -> DecodedGate:
    gid, target, control, angle_idx = (int(x) for x in gene)
    gs, n, grid = space.gate_set, space.n_qubits, space.grid
    if not 0 <= gid <= len(gs):
        raise MalformedGenotypeError(f"gate id {gid} outside 0..{len(gs)}")
    if not 0 <= control <= n:
        raise MalformedGenotypeError(f"control {control} outside 0..{n}")
    if not 0 <= angle_idx < grid.count:
        raise MalformedGenotypeError(f"angle index {angle_idx} outside 0..{grid.count - 1}")
    if gid == 0:
        if not 0 <= target <= n:
            raise MalformedGenotypeError(f"target {target} outside 0..{n}")
        return NOOP_GATE
    if not 1 <= target <= n:
        raise MalformedGenotypeError(f"target {target} outside 1..{n}")
    entry = gs.entry(gid)
    if entry.needs_control and (control == 0 or control == target):
        return NOOP_GATE
    idx = angle_idx if entry.gate.is_rotation else 0
    return DecodedGate(
        kind=entry.variant,
        gate=entry.gate,
        target=target - 1,
        control=control - 1 if entry.needs_control else None,
        angle_idx=idx,
        theta=grid.value(idx),
    )


def decode(genotype: np.ndarray, space: SearchSpace) -> tuple[DecodedGate, ...]:
    """Decode a genotype slot by slot; no-op genes keep their position."""
    arr = np.asarray(genotype).reshape(-1, FIELDS_PER_GATE)
    return tuple(decode_gene(row, space) for row in arr)


def gate_matrix(g: DecodedGate, n: int) -> np.ndarray:
    """Full 2^n unitary of one placed gate.

    Controlled kinds go through the block builders, whose index arithmetic
    swaps the roles of the placement arguments and addresses the block in
    reversed bit order; passing (control, target) swapped and the block
    elements reversed yields the standard controlled gate (the brute-force
    oracle tests pin this).
    """
    if g.kind == NOOP:
        return identity(1 << n)
    u = g.gate.matrix_fn(g.theta)
    if g.kind == SINGLE:
        return embed_in_register(u, g.target, n)
    lo = min(g.target, g.control)
    placement = LocalPlacement(target=g.control - lo, control=g.target - lo)
    build = build_single_control if g.kind == CONTROL else build_multi_control
    block = build(u[::-1, ::-1], placement)
    return embed_in_register(block, lo, n)


def circuit_unitary(circuit: Sequence[DecodedGate], n: int) -> np.ndarray:
    """Product of the gate unitaries, first gate applied first."""
    u = identity(1 << n)
    for g in circuit:
        if g.kind == NOOP:
            continue
        u = gate_matrix(g, n) @ u
    return u


def gate_cost(g: DecodedGate) -> int:
    """1 per single gate; controlled gates scale with qubit distance."""
    if g.kind == NOOP:
        return 0
    if g.kind == SINGLE:
        return 1
    dist = abs(g.control - g.target)
    return (2 if g.kind == CONTROL else 3) * dist


def circuit_cost(circuit: Sequence[DecodedGate]) -> int:
    return sum(gate_cost(g) for g in circuit)


_VARIANT_LABELS = {SINGLE: "Single", CONTROL: "Control", MULTICONTROL: "Multicontrol"}
_LABEL_VARIANTS = {v: k for k, v in _VARIANT_LABELS.items()}

TABLE_HEADER = "G, T, C, Q"


def render_table(circuit: Sequence[DecodedGate]) -> str:
    """One 'G, T, C, Q' row per slot; no-op slots render as zeros."""
    lines = [TABLE_HEADER]
    for g in circuit:
        if g.kind == NOOP:
            lines.append("0, 0, 0, 0")
            continue
        name = f"{_VARIANT_LABELS[g.kind]} {g.gate.name}"
        control = 0 if g.control is None else g.control + 1
        lines.append(f"{name}, {g.target + 1}, {control}, {g.angle_idx}")
    return "\n".join(lines) + "\n"


def parse_table(text: str, space: SearchSpace) -> tuple[DecodedGate, ...]:
    """Parse a rendered table back into a decoded circuit.

    Blank lines, '#' comments and the header row are skipped; errors carry
    the 1-based line number.
    """
    circuit = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = [t for t in line.replace(",", " ").split() if t]
        if tokens[0] == "G" and len(tokens) <= FIELDS_PER_GATE:
            continue  # header
        if len(tokens) == FIELDS_PER_GATE and tokens[0] == "0":
            circuit.append(NOOP_GATE)
            continue
        if len(tokens) != FIELDS_PER_GATE + 1:
            raise TableParseError(f"line {ln}: expected 'Variant Name, T, C, Q', got {raw!r}")
        variant_word, name = tokens[0], tokens[1]
        if variant_word not in _LABEL_VARIANTS:
            raise TableParseError(f"line {ln}: unknown gate variant {variant_word!r}")
        if name not in ELEMENTARY_GATES:
            raise TableParseError(f"line {ln}: unknown gate name {name!r}")
        try:
            target, control, angle_idx = (int(t) for t in tokens[2:])
        except ValueError:
            raise TableParseError(f"line {ln}: T, C, Q must be integers in {raw!r}") from None
        kind = _LABEL_VARIANTS[variant_word]
        gate = ELEMENTARY_GATES[name]
        n = space.n_qubits
        if not 1 <= target <= n:
            raise TableParseError(f"line {ln}: target {target} outside 1..{n}")
        if not 0 <= control <= n:
            raise TableParseError(f"line {ln}: control {control} outside 0..{n}")
        if not 0 <= angle_idx < space.grid.count:
            raise TableParseError(
                f"line {ln}: angle index {angle_idx} outside 0..{space.grid.count - 1}"
            )
        if kind != SINGLE and (control == 0 or control == target):
            circuit.append(NOOP_GATE)
            continue
        idx = angle_idx if gate.is_rotation else 0
        circuit.append(
            DecodedGate(
                kind=kind,
                gate=gate,
                target=target - 1,
                control=control - 1 if kind != SINGLE else None,
                angle_idx=idx,
                theta=space.grid.value(idx),
            )
        )
    return tuple(circuit)
