"""Command-line entry point: configure a search, run it, report results.

Configuration precedence is flags > config file (JSON, keys named like the
long flags with underscores) > built-in defaults.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import gloa
from .circuit import (
    AngleGrid,
    GateSet,
    SearchSpace,
    TableParseError,
    circuit_cost,
    circuit_unitary,
    parse_table,
    render_table,
)
from .objective import ObjectiveWeights, correctness, objective
from .targets import BUILTIN_TARGETS, MatrixFileError, TargetSpec, load_matrix_file


class CliError(ValueError):
    """Configuration problem reported with a clean message and exit code 2."""


DEFAULTS = {
    "qubits": None,
    "max_gates": 8,
    "iterations": 500,
    "groups": 15,
    "group_size": 25,
    "r1": 0.8,
    "r2": 0.1,
    "r3": 0.1,
    "transfers": None,
    "alpha": 0.9,
    "beta": 0.1,
    "angle_preset": "default",
    "angle_step": None,
    "gate_set": "default",
    "seed": 0,
    "out": None,
    "report_every": 50,
    "threads": 1,
    "target": None,
    "matrix_file": None,
    "reevaluate": None,
}


@dataclass
class RunConfig:
    target_kind: str  # "builtin" | "file"
    target_name: str
    qubits: Optional[int]  # None for file targets until loaded
    max_gates: int
    gate_set: GateSet
    grid: AngleGrid
    params: gloa.OptimizerParams
    weights: ObjectiveWeights
    out: Optional[str]
    report_every: int
    threads: int
    reevaluate: Optional[str]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gatesynth",
        description="Decompose a unitary matrix into a low-cost quantum gate sequence.",
    )
    p.add_argument("--target", help=f"builtin target: {', '.join(sorted(BUILTIN_TARGETS))}")
    p.add_argument("--matrix-file", help="path to a matrix file holding the target unitary")
    p.add_argument("--qubits", type=int, help="register size n")
    p.add_argument("--max-gates", type=int, help="genotype slots (default 8)")
    p.add_argument("--iterations", type=int, help="optimizer iterations (default 500)")
    p.add_argument("--groups", type=int, help="number of groups (default 15)")
    p.add_argument("--group-size", type=int, help="members per group (default 25)")
    p.add_argument("--r1", type=float, help="old-member rate (default 0.8)")
    p.add_argument("--r2", type=float, help="leader rate (default 0.1)")
    p.add_argument("--r3", type=float, help="random rate (default 0.1)")
    p.add_argument("--transfers", type=int,
                   help="parameter transfers per group (default: variables/2 - 1)")
    p.add_argument("--alpha", type=float, help="correctness weight (default 0.9)")
    p.add_argument("--beta", type=float, help="cost weight (default 0.1)")
    p.add_argument("--angle-preset", choices=["default", "h2"],
                   help="rotation angle grid: 0.125*pi steps or 0.005 rad steps")
    p.add_argument("--angle-step", type=float, help="custom angle step in radians")
    p.add_argument("--gate-set", help="'default' or comma list of variant:Name tokens")
    p.add_argument("--seed", type=int, help="random seed (default 0)")
    p.add_argument("--out", help="write the run record to this file instead of stdout")
    p.add_argument("--report-every", type=int, help="progress line interval (default 50)")
    p.add_argument("--threads", type=int, help="evaluation worker threads (default 1)")
    p.add_argument("--reevaluate", metavar="TABLE_FILE",
                   help="score an existing G/T/C/Q table against the target and exit")
    p.add_argument("--config", help="JSON config file; flags override its values")
    return p


def _merge_settings(ns: argparse.Namespace) -> dict:
    settings = dict(DEFAULTS)
    if ns.config is not None:
        try:
            with open(ns.config, "r", encoding="utf-8") as fh:
                file_values = json.load(fh)
        except OSError as exc:
            raise CliError(f"cannot read config file: {exc}") from None
        except json.JSONDecodeError as exc:
            raise CliError(f"config file is not valid JSON: {exc}") from None
        for key, value in file_values.items():
            if key not in DEFAULTS:
                raise CliError(f"unknown config file key: {key!r}")
            settings[key] = value
    for key in DEFAULTS:
        flag_value = getattr(ns, key)
        if flag_value is not None:
            settings[key] = flag_value
    return settings


def parse_config(argv: Sequence[str]) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if not argv:
        parser.error("no arguments: choose a target with --target or --matrix-file")
    s = _merge_settings(ns)

    if abs(s["r1"] + s["r2"] + s["r3"] - 1.0) > 1e-9:
        raise CliError(
            f"mutation rates must sum to 1: r1={s['r1']} r2={s['r2']} r3={s['r3']}"
        )
    if abs(s["alpha"] + s["beta"] - 1.0) > 1e-9:
        raise CliError(f"alpha + beta must equal 1: got {s['alpha']} + {s['beta']}")
    if int(s["max_gates"]) < 1:
        raise CliError("--max-gates must be >= 1")
    if int(s["report_every"]) < 1:
        raise CliError("--report-every must be >= 1")
    if int(s["threads"]) < 1:
        raise CliError("--threads must be >= 1")

    if s["target"] is not None and s["matrix_file"] is not None:
        raise CliError("choose either --target or --matrix-file, not both")
    if s["target"] is not None:
        name = s["target"]
        if name not in BUILTIN_TARGETS:
            raise CliError(
                f"unknown target {name!r}; builtins: {', '.join(sorted(BUILTIN_TARGETS))}"
            )
        fixed_n = BUILTIN_TARGETS[name][1]
        qubits = s["qubits"]
        if fixed_n is not None:
            if qubits is not None and qubits != fixed_n:
                raise CliError(
                    f"inconsistent qubit count: target {name!r} is fixed at "
                    f"{fixed_n} qubits, got --qubits {qubits}"
                )
            qubits = fixed_n
        elif qubits is None:
            qubits = 2
        target_kind, target_name = "builtin", name
    elif s["matrix_file"] is not None:
        target_kind, target_name = "file", s["matrix_file"]
        qubits = s["qubits"]  # validated against the file on load
    else:
        raise CliError("a target is required: --target or --matrix-file")

    if s["angle_step"] is not None:
        grid = AngleGrid.from_step(float(s["angle_step"]))
    elif s["angle_preset"] == "h2":
        grid = AngleGrid.h2()
    else:
        grid = AngleGrid.default()

    try:
        gate_set = GateSet.parse(s["gate_set"])
    except ValueError as exc:
        raise CliError(str(exc)) from None

    try:
        params = gloa.OptimizerParams(
            num_groups=int(s["groups"]),
            group_size=int(s["group_size"]),
            r1=float(s["r1"]),
            r2=float(s["r2"]),
            r3=float(s["r3"]),
            transfers_per_group=None if s["transfers"] is None else int(s["transfers"]),
            max_iterations=int(s["iterations"]),
            seed=int(s["seed"]),
        )
        weights = ObjectiveWeights(alpha=float(s["alpha"]), beta=float(s["beta"]))
    except ValueError as exc:
        raise CliError(str(exc)) from None

    return RunConfig(
        target_kind=target_kind,
        target_name=target_name,
        qubits=qubits,
        max_gates=int(s["max_gates"]),
        gate_set=gate_set,
        grid=grid,
        params=params,
        weights=weights,
        out=s["out"],
        report_every=int(s["report_every"]),
        threads=int(s["threads"]),
        reevaluate=s["reevaluate"],
    )


def _resolve_target(cfg: RunConfig) -> tuple[np.ndarray, int]:
    if cfg.target_kind == "builtin":
        spec = TargetSpec("builtin", cfg.target_name, cfg.qubits)
        return spec.resolve(), cfg.qubits
    matrix = load_matrix_file(cfg.target_name)
    n = matrix.shape[0].bit_length() - 1
    if cfg.qubits is not None and cfg.qubits != n:
        raise CliError(
            f"inconsistent qubit count: matrix file has order {matrix.shape[0]} "
            f"({n} qubits), got --qubits {cfg.qubits}"
        )
    return matrix, n


def format_record(
    cfg: RunConfig, space: SearchSpace, result: gloa.RunResult, wall_time: float
) -> str:
    p = cfg.params
    params_line = (
        f"num_groups={p.num_groups} group_size={p.group_size} "
        f"r1={p.r1!r} r2={p.r2!r} r3={p.r3!r} "
        f"transfers_per_group={p.resolved_transfers(space)} "
        f"max_iterations={p.max_iterations} "
        f"alpha={cfg.weights.alpha!r} beta={cfg.weights.beta!r}"
    )
    genotype = " ".join(str(int(x)) for x in result.best_genotype)
    lines = [
        f"target: {cfg.target_name}",
        f"n: {space.n_qubits}",
        f"max_gates: {space.max_gates}",
        f"seed: {p.seed}",
        f"params: {params_line}",
        f"iterations_run: {result.iterations_run}",
        f"best_y: {result.best.y!r}",
        f"best_c: {result.best.c!r}",
        f"best_cost: {result.best.cost}",
        f"wall_time_s: {wall_time:.3f}",
        f"genotype: {genotype}",
        "table:",
        render_table(result.best.circuit).rstrip("\n"),
    ]
    return "\n".join(lines) + "\n"


def execute(cfg: RunConfig) -> int:
    """Run the search, stream progress lines, write the final record."""
    try:
        target, n = _resolve_target(cfg)
    except (MatrixFileError, CliError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    space = SearchSpace(n, cfg.max_gates, cfg.gate_set, cfg.grid)

    print("# iter, best_y, best_c, best_cost")

    def report(entry: gloa.IterationStats) -> None:
        if entry.iteration % cfg.report_every == 0:
            print(entry.line(), flush=True)

    start = time.perf_counter()
    result = gloa.run(
        target,
        cfg.params,
        space,
        weights=cfg.weights,
        progress=report,
        threads=cfg.threads,
    )
    wall = time.perf_counter() - start
    if result.log[-1].iteration % cfg.report_every != 0:
        print(result.log[-1].line(), flush=True)

    record = format_record(cfg, space, result, wall)
    if cfg.out is None:
        print(record, end="")
    else:
        try:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                fh.write(record)
        except OSError as exc:
            print(f"error: cannot write {cfg.out!r}: {exc}", file=sys.stderr)
            return 1
        print(f"record written to {cfg.out}")
    return 0


def reevaluate(cfg: RunConfig) -> int:
    """Score a rendered G/T/C/Q table against the configured target."""
    try:
        target, n = _resolve_target(cfg)
    except (MatrixFileError, CliError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    space = SearchSpace(n, cfg.max_gates, cfg.gate_set, cfg.grid)
    try:
        with open(cfg.reevaluate, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {cfg.reevaluate!r}: {exc}", file=sys.stderr)
        return 1
    try:
        circuit = parse_table(text, space)
    except TableParseError as exc:
        print(f"error: {cfg.reevaluate}: {exc}", file=sys.stderr)
        return 1
    u_f = circuit_unitary(circuit, n)
    c = correctness(u_f, target)
    cost = circuit_cost(circuit)
    y = objective(c, cost, cfg.weights)
    print(f"y: {y!r}")
    print(f"c: {c!r}")
    print(f"cost: {cost}")
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        cfg = parse_config(list(argv))
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.reevaluate is not None:
        return reevaluate(cfg)
    return execute(cfg)


if __name__ == "__main__":
    sys.exit(main())
