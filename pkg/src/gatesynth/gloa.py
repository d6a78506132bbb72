"""Group leaders optimization over circuit genotypes.

Disjoint groups each track their best member (the leader).  Every
iteration runs a mutation sweep (each variable comes from the old member,
the group leader, or a fresh random value with rates r1/r2/r3), then
one-way parameter transfers between groups, both with strictly-greedy
acceptance.  Leaders are refreshed at the end of the iteration.

With a fixed seed a run is fully reproducible; candidate generation draws
from a single stream in a fixed order, and evaluation is pure, so the
optional thread pool does not change results.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .circuit import SearchSpace
from .objective import EvaluationResult, Evaluator, ObjectiveWeights


@dataclass(frozen=True)
class OptimizerParams:
    num_groups: int = 15
    group_size: int = 25
    r1: float = 0.8
    r2: float = 0.1
    r3: float = 0.1
    transfers_per_group: Optional[int] = None  # default: num_variables / 2 - 1
    max_iterations: int = 500
    seed: int = 0
    target_objective: Optional[float] = None

    def __post_init__(self) -> None:
        if abs(self.r1 + self.r2 + self.r3 - 1.0) > 1e-9:
            raise ValueError(
                f"r1 + r2 + r3 must equal 1, got {self.r1 + self.r2 + self.r3}"
            )
        if min(self.r1, self.r2, self.r3) < 0:
            raise ValueError("mutation rates must be nonnegative")
        if self.num_groups < 2:
            raise ValueError("need at least 2 groups")
        if self.group_size < 1:
            raise ValueError("group size must be >= 1")
        if self.transfers_per_group is not None and self.transfers_per_group < 0:
            raise ValueError("transfers_per_group must be >= 0")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be >= 0")

    def resolved_transfers(self, space: SearchSpace) -> int:
        if self.transfers_per_group is not None:
            return self.transfers_per_group
        return space.num_variables // 2 - 1


@dataclass
class Member:
    genotype: np.ndarray
    result: EvaluationResult


@dataclass
class Population:
    groups: list[list[Member]]
    leaders: list[int] = field(default_factory=list)

    def refresh_leaders(self) -> None:
        self.leaders = [
            min(range(len(group)), key=lambda i: group[i].result.y)
            for group in self.groups
        ]

    def best(self) -> Member:
        return min(
            (m for group in self.groups for m in group), key=lambda m: m.result.y
        )

    def size(self) -> int:
        return sum(len(group) for group in self.groups)


class IterationStats(NamedTuple):
    iteration: int
    best_y: float
    best_c: float
    best_cost: int

    def line(self) -> str:
        return f"{self.iteration}, {self.best_y:.12g}, {self.best_c:.12g}, {self.best_cost}"


@dataclass
class RunResult:
    best: EvaluationResult
    best_genotype: np.ndarray
    iterations_run: int
    log: list[IterationStats]


def init_population(
    params: OptimizerParams,
    space: SearchSpace,
    evaluator: Evaluator,
    rng: np.random.Generator,
) -> Population:
    """Uniform random genotypes, evaluated, leaders computed."""
    lo, hi = space.field_bounds()
    draws = rng.integers(
        lo, hi + 1, size=(params.num_groups, params.group_size, space.num_variables)
    )
    groups = [
        [
            Member(draws[g, m].copy(), evaluator.evaluate(draws[g, m]))
            for m in range(params.group_size)
        ]
        for g in range(params.num_groups)
    ]
    pop = Population(groups)
    pop.refresh_leaders()
    return pop


def mutate_member(
    old: np.ndarray,
    leader: np.ndarray,
    params: OptimizerParams,
    space: SearchSpace,
    rng: np.random.Generator,
) -> np.ndarray:
    """Per-variable three-source recombination of old / leader / random."""
    if old.shape != leader.shape:
        raise ValueError("genotype lengths differ")
    lo, hi = space.field_bounds()
    choice = rng.random(old.size)
    fresh = rng.integers(lo, hi + 1)
    return np.where(
        choice < params.r1, old, np.where(choice < params.r1 + params.r2, leader, fresh)
    )


def transfer_step(
    pop: Population,
    params: OptimizerParams,
    space: SearchSpace,
    rng: np.random.Generator,
    evaluator: Evaluator,
) -> Population:
    """One-way crossover: copy one random variable from a member of another
    group, keeping the change only on strict improvement."""
    num_groups = len(pop.groups)
    transfers = params.resolved_transfers(space)
    for g in range(num_groups):
        group = pop.groups[g]
        for _ in range(transfers):
            m_idx = int(rng.integers(len(group)))
            other = int(rng.integers(num_groups - 1))
            if other >= g:
                other += 1
            donor = pop.groups[other][int(rng.integers(len(pop.groups[other])))]
            var = int(rng.integers(space.num_variables))
            member = group[m_idx]
            value = donor.genotype[var]
            if value == member.genotype[var]:
                continue  # identical variable cannot strictly improve
            candidate = member.genotype.copy()
            candidate[var] = value
            result = evaluator.evaluate(candidate)
            if result.y < member.result.y:
                member.genotype = candidate
                member.result = result
    return pop


def _mutation_sweep(
    pop: Population,
    params: OptimizerParams,
    space: SearchSpace,
    rng: np.random.Generator,
    evaluator: Evaluator,
    pool: Optional[ThreadPoolExecutor],
) -> None:
    # Candidates are generated up front in a fixed order, so evaluation can
    # fan out to threads without changing the random stream or the outcome.
    candidates = []
    for g, group in enumerate(pop.groups):
        leader = group[pop.leaders[g]].genotype
        for member in group:
            candidates.append(mutate_member(member.genotype, leader, params, space, rng))
    if pool is None:
        results = [evaluator.evaluate(c) for c in candidates]
    else:
        results = list(pool.map(evaluator.evaluate, candidates, chunksize=16))
    i = 0
    for group in pop.groups:
        for member in group:
            if results[i].y < member.result.y:
                member.genotype = candidates[i]
                member.result = results[i]
            i += 1


def run(
    target: np.ndarray,
    params: OptimizerParams,
    space: SearchSpace,
    weights: ObjectiveWeights = ObjectiveWeights(),
    progress: Optional[Callable[[IterationStats], None]] = None,
    stop_when: Optional[Callable[[EvaluationResult], bool]] = None,
    threads: int = 1,
) -> RunResult:
    """Full optimization loop; returns the best result and the per-iteration
    best-objective trace (entry 0 is the initial population)."""
    rng = np.random.default_rng(params.seed)
    evaluator = Evaluator(target, space, weights)
    pop = init_population(params, space, evaluator, rng)

    best = pop.best()
    best_genotype = best.genotype.copy()
    best_result = best.result

    def stats(iteration: int) -> IterationStats:
        return IterationStats(iteration, best_result.y, best_result.c, best_result.cost)

    log = [stats(0)]
    if progress is not None:
        progress(log[0])

    def done() -> bool:
        if params.target_objective is not None and best_result.y <= params.target_objective:
            return True
        return stop_when is not None and stop_when(best_result)

    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    iterations_run = 0
    try:
        if not done():
            for iteration in range(1, params.max_iterations + 1):
                _mutation_sweep(pop, params, space, rng, evaluator, pool)
                transfer_step(pop, params, space, rng, evaluator)
                pop.refresh_leaders()
                current = pop.best()
                if current.result.y < best_result.y:
                    best_result = current.result
                    best_genotype = current.genotype.copy()
                entry = stats(iteration)
                log.append(entry)
                if progress is not None:
                    progress(entry)
                iterations_run = iteration
                if done():
                    break
    finally:
        if pool is not None:
            pool.shutdown()

    return RunResult(
        best=best_result,
        best_genotype=best_genotype,
        iterations_run=iterations_run,
        log=log,
    )
