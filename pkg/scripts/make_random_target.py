#!/usr/bin/env python3
"""Write a random product-of-gates unitary to a matrix file.

Draws non-trivial genes uniformly from the gate set, builds the circuit
unitary, and saves it in the loader's text format together with the
generating table as a comment, so rediscovery runs have a known reference.

Usage:
    python scripts/make_random_target.py --qubits 4 --gates 12 --seed 1 \\
        --angle-preset h2 --out target16.mat
"""
import argparse

import numpy as np

from gatesynth.circuit import (
    AngleGrid,
    GateSet,
    SearchSpace,
    circuit_cost,
    circuit_unitary,
    decode,
    render_table,
)
from gatesynth.targets import save_matrix_file


def random_product_genotype(space: SearchSpace, rng: np.random.Generator) -> np.ndarray:
    """Genotype whose every slot decodes to an active (non-noop) gate."""
    lo, hi = space.field_bounds()
    genes = []
    for slot in range(space.max_gates):
        while True:
            row = rng.integers(lo[:4], hi[:4] + 1)
            row[0] = rng.integers(1, len(space.gate_set) + 1)  # skip the no-op id
            decoded = decode(row, space)[0]
            if decoded.kind != "noop":
                genes.append(row)
                break
    return np.concatenate(genes)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--qubits", type=int, default=4)
    parser.add_argument("--gates", type=int, default=12)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--angle-preset", choices=["default", "h2"], default="h2")
    parser.add_argument("--out", required=True)
    args = parser.parse_args()

    grid = AngleGrid.h2() if args.angle_preset == "h2" else AngleGrid.default()
    space = SearchSpace(args.qubits, args.gates, GateSet.default(), grid)
    rng = np.random.default_rng(args.seed)
    genotype = random_product_genotype(space, rng)
    circuit = decode(genotype, space)
    matrix = circuit_unitary(circuit, args.qubits)
    table = render_table(circuit)
    comment = (
        f"random {args.gates}-gate product on {args.qubits} qubits, seed {args.seed}\n"
        f"generating circuit (cost {circuit_cost(circuit)}):\n" + table
    )
    save_matrix_file(args.out, matrix, comment=comment)
    print(f"wrote {matrix.shape[0]}x{matrix.shape[0]} unitary to {args.out}")
    print(table, end="")


if __name__ == "__main__":
    main()
