import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gatesynth.circuit import AngleGrid, GateSet
from gatesynth.gates import (
    ELEMENTARY_GATES,
    LocalPlacement,
    block_write_positions,
    build_multi_control,
    build_single_control,
    embed_in_register,
    single_gate_matrix,
)
from gatesynth.linalg import identity, is_unitary, kron
from oracles import controlled_oracle, haar_unitary, span_controls

X = np.array([[0, 1], [1, 0]], dtype=complex)
GRID = AngleGrid.default()


def test_pauli_x_matrix():
    assert np.array_equal(single_gate_matrix("X"), X)


def test_v_squares_to_x():
    v = single_gate_matrix("V")
    assert np.allclose(v, 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]]))
    assert np.allclose(v @ v, X)
    assert np.allclose(v @ single_gate_matrix("Vdg"), identity(2))


def test_zero_angle_rotation_is_identity():
    assert np.allclose(single_gate_matrix("Rz", 0.0), identity(2))
    assert np.allclose(single_gate_matrix("Rx", 0.0), identity(2))


def test_unknown_gate_name():
    with pytest.raises(ValueError, match="unknown gate"):
        single_gate_matrix("Hadamardish")


def test_all_default_gates_unitary_on_grid():
    for gate in ELEMENTARY_GATES.values():
        for k in range(GRID.count):
            assert is_unitary(gate.matrix(GRID.value(k)), 1e-12), (gate.name, k)


# --- the block builders, pinned against the hand-executed examples


def test_single_control_d1_swaps_1_3():
    out = build_single_control(X, LocalPlacement(target=0, control=1))
    expected = identity(4)
    expected[[1, 3]] = expected[[3, 1]]
    assert np.array_equal(out, expected)


def test_single_control_identity_block():
    for placement in [LocalPlacement(0, 1), LocalPlacement(2, 0), LocalPlacement(0, 3)]:
        out = build_single_control(identity(2), placement)
        assert np.array_equal(out, identity(1 << (placement.d + 1)))


def test_single_control_d2_swaps_two_pairs():
    out = build_single_control(X, LocalPlacement(target=0, control=2))
    expected = identity(8)
    expected[[1, 5]] = expected[[5, 1]]
    expected[[3, 7]] = expected[[7, 3]]
    assert np.array_equal(out, expected)


def test_multi_control_d2_is_toffoli_pattern():
    out = build_multi_control(X, LocalPlacement(target=0, control=2))
    expected = identity(8)
    expected[[3, 7]] = expected[[7, 3]]
    assert np.array_equal(out, expected)


def test_multi_control_d1_equals_single_control():
    for u_name in ["X", "Y", "V", "Rz"]:
        u = single_gate_matrix(u_name, 0.375 * np.pi)
        for placement in [LocalPlacement(0, 1), LocalPlacement(1, 0)]:
            assert np.array_equal(
                build_multi_control(u, placement), build_single_control(u, placement)
            )


def test_multi_control_identity_block():
    out = build_multi_control(identity(2), LocalPlacement(0, 3))
    assert np.array_equal(out, identity(16))


def test_builders_reject_bad_placements():
    with pytest.raises(ValueError, match="d = 0"):
        build_single_control(X, LocalPlacement(1, 1))
    with pytest.raises(ValueError, match="normalized"):
        build_single_control(X, LocalPlacement(1, 2))
    with pytest.raises(ValueError, match="d = 0"):
        build_multi_control(X, LocalPlacement(0, 0))


def test_write_counts_scale_as_specified():
    # single-control writes 4 * 2^(d-1) entries, multi-control always 4
    for d in (1, 2, 3, 4):
        p = LocalPlacement(target=0, control=d)
        assert 4 * len(block_write_positions(p, multi=False)) == 4 * 2 ** (d - 1)
        assert 4 * len(block_write_positions(p, multi=True)) == 4


# --- oracle equivalence: the builders' argument/bit mapping

def _semantic_single(u, target, control, n):
    """Standard controlled-u built through the production mapping."""
    lo = min(target, control)
    block = build_single_control(u[::-1, ::-1], LocalPlacement(control - lo, target - lo))
    return embed_in_register(block, lo, n)


def _semantic_multi(u, target, control, n):
    lo = min(target, control)
    block = build_multi_control(u[::-1, ::-1], LocalPlacement(control - lo, target - lo))
    return embed_in_register(block, lo, n)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 4))
def test_oracle_equivalence_random_gate(seed, n):
    u = haar_unitary(2, seed)
    for target in range(n):
        for control in range(n):
            if target == control:
                continue
            got = _semantic_single(u, target, control, n)
            assert np.allclose(got, controlled_oracle(u, target, [control], n), atol=1e-12)
            got = _semantic_multi(u, target, control, n)
            want = controlled_oracle(u, target, span_controls(target, control), n)
            assert np.allclose(got, want, atol=1e-12)


def test_builders_unitary_for_default_set():
    for gate in ELEMENTARY_GATES.values():
        for k in range(GRID.count):
            u = gate.matrix(GRID.value(k))
            for d in (1, 2, 3):
                for placement in [LocalPlacement(0, d), LocalPlacement(d, 0)]:
                    assert is_unitary(build_single_control(u, placement), 1e-12)
                    assert is_unitary(build_multi_control(u, placement), 1e-12)


# --- embedding


def test_embed_whole_register():
    out = embed_in_register(X, 0, 1)
    assert np.array_equal(out, X)
    out[0, 0] = 123  # must be a copy, not the module's constant
    assert ELEMENTARY_GATES["X"].matrix()[0, 0] == 0


def test_embed_identity_block():
    assert np.array_equal(embed_in_register(identity(4), 0, 3), identity(8))
    assert np.array_equal(embed_in_register(identity(4), 1, 3), identity(8))


def test_embed_cnot_block_matches_projector_oracle():
    # CNOT on local qubits (control bit 0, target bit 1), embedded at qubit 1 of 3
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    cnot = kron(identity(2), p0) + kron(X, p1)  # high bit = target
    got = embed_in_register(cnot, 1, 3)
    want = kron(kron(identity(2), p0), identity(2)) + kron(kron(X, p1), identity(2))
    assert np.allclose(got, want, atol=1e-14)
    assert np.allclose(got, controlled_oracle(X, 2, [1], 3), atol=1e-14)


def test_embed_rejects_out_of_register():
    with pytest.raises(ValueError, match="outside register"):
        embed_in_register(identity(4), 2, 3)
    with pytest.raises(ValueError, match="power of two"):
        embed_in_register(np.eye(3, dtype=complex), 0, 2)


def test_default_gate_set_controlled_outputs_unitary_d_up_to_3():
    # every (gate, angle, placement) combination used by 4-qubit circuits
    gs = GateSet.default()
    for entry in gs:
        if entry.variant == "single":
            continue
        for k in range(GRID.count):
            u = entry.gate.matrix(GRID.value(k))
            for d in (1, 2, 3):
                for placement in [LocalPlacement(0, d), LocalPlacement(d, 0)]:
                    build = (
                        build_single_control
                        if entry.variant == "control"
                        else build_multi_control
                    )
                    assert is_unitary(build(u, placement), 1e-12)
