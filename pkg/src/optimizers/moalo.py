"""Multi-objective ant lion optimizer."""

from __future__ import annotations

import numpy as np
from loguru import logger

from src.energy import SolutionShapeError
from src.objective import Solution, continuous_bounds, repair
from src.optimizers.archive import roulette_select, selection_weights, update_archive
from src.optimizers.base import (
    STREAM_ARCHIVE,
    STREAM_INIT,
    STREAM_MEMBER,
    AlgoParams,
    Archive,
    ArchiveEntry,
    BaseOptimizer,
    ConvergenceRow,
    IterationCallback,
    RunResult,
)
from src.scenario import Scenario
from src.utils import derive_rng


def shrink_ratio(t: int, max_iterations: int, schedule) -> float:
    """Boundary shrink factor I for iteration t."""
    ratio = t / max_iterations
    exponent = 0
    for threshold, w in schedule:
        if ratio > threshold:
            exponent = w
    if exponent == 0:
        return 1.0
    return 1.0 + 10.0**exponent * ratio


def random_walk(steps: int, dims: int, rng: np.random.Generator) -> np.ndarray:
    """(steps + 1, dims) cumulative sums of +-1 steps, starting at 0."""
    moves = np.where(rng.random((steps, dims)) > 0.5, 1.0, -1.0)
    return np.vstack([np.zeros((1, dims)), np.cumsum(moves, axis=0)])


def guide_solution(
    anchor: Solution,
    t: int,
    params: AlgoParams,
    lower: np.ndarray,
    upper: np.ndarray,
    rng: np.random.Generator,
) -> Solution:
    """Random walk around ``anchor`` within a window that shrinks as t grows.

    Each continuous coordinate walks ``max_iterations`` steps; the walk is
    min-max scaled into [x - range / I, x + range / I] and read at index t.
    Receivers are copied from the anchor.
    """
    x = anchor.continuous()
    half_width = (upper - lower) / shrink_ratio(t, params.max_iterations, params.shrink_schedule)
    low, high = x - half_width, x + half_width

    walk = random_walk(params.max_iterations, len(x), rng)
    w_min, w_max = walk.min(axis=0), walk.max(axis=0)
    spread = w_max - w_min
    scaled = np.where(spread > 0, (walk[t] - w_min) / np.where(spread > 0, spread, 1.0), 0.5)
    guided = np.clip(low + scaled * (high - low), lower, upper)
    return Solution.from_continuous(guided, anchor.receivers.copy(), anchor.n_uav)


def update_solution(
    x_r: Solution,
    x_a: Solution,
    x_old: Solution,
    rng: np.random.Generator,
    scenario: Scenario,
) -> Solution:
    """Average guide and archive solutions; receivers follow the integer update rule."""
    from src.optimizers.rsi import integer_update

    if not (x_r.positions.shape == x_a.positions.shape == x_old.positions.shape):
        raise SolutionShapeError("solutions to combine have different shapes")
    mean = (x_r.continuous() + x_a.continuous()) / 2
    receivers = integer_update(x_a.receivers, x_old.receivers, scenario.n_uav, rng)
    return repair(Solution.from_continuous(mean, receivers, scenario.n_uav), scenario)


def uniform_population(scenario: Scenario, size: int, rng: np.random.Generator) -> list[Solution]:
    """Candidates drawn uniformly inside the swarm areas."""
    lower, upper = scenario.position_bounds()
    n = scenario.n_uav
    return [
        Solution(
            positions=rng.uniform(lower, upper),
            weights=rng.random((2, n)),
            receivers=rng.integers(0, n, size=2),
        )
        for _ in range(size)
    ]


class MOALO(BaseOptimizer):
    """Vanilla MOALO: uniform initialisation and dominance plus crowding archive."""

    @property
    def algorithm_id(self) -> str:
        return "moalo"

    def initial_population(self) -> list[Solution]:
        rng = derive_rng(self.params.seed, STREAM_INIT)
        return uniform_population(self.scenario, self.params.population_size, rng)

    def evolve_archive(self, archive: Archive, evaluated: list[ArchiveEntry], t: int) -> Archive:
        rng = derive_rng(self.params.seed, STREAM_ARCHIVE, t)
        return update_archive(archive, evaluated, rng, self.params.niche_radius_fraction)

    def thresholds(self) -> list:
        return []

    def run(
        self,
        init: list[Solution] | None = None,
        on_iteration: IterationCallback | None = None,
    ) -> RunResult:
        params = self.params
        lower, upper = continuous_bounds(self.scenario)
        population = list(init) if init is not None else self.initial_population()
        archive = Archive(params.capacity)
        convergence = []

        logger.info(
            f"Starting {self.algorithm_id}: N={params.population_size}, "
            f"t_max={params.max_iterations}, seed={params.seed}"
        )
        for t in range(1, params.max_iterations + 1):
            objectives = self.evaluator.evaluate_population(population)
            evaluated = [ArchiveEntry(s, o) for s, o in zip(population, objectives)]
            archive = self.evolve_archive(archive, evaluated, t)

            row = ConvergenceRow.from_archive(t, archive)
            convergence.append(row)
            logger.debug(
                f"t={t} archive={row.archive_size} best f1={row.best_f1:.4g} "
                f"f2={row.best_f2:.3f} f3={row.best_f3:.4g}"
            )
            if on_iteration is not None:
                on_iteration(t, archive)
            if t == params.max_iterations:
                break

            weights = selection_weights(archive, params.niche_radius_fraction)
            next_population = []
            for n, old in enumerate(population):
                rng = derive_rng(params.seed, STREAM_MEMBER, t, n)
                anchor = roulette_select(archive, rng, weights=weights).solution
                guide = guide_solution(anchor, t, params, lower, upper, rng)
                next_population.append(update_solution(guide, anchor, old, rng, self.scenario))
            population = next_population

        logger.info(f"Finished {self.algorithm_id}: archive holds {len(archive)} solutions")
        return RunResult(
            algorithm_id=self.algorithm_id,
            params=params,
            archive=archive,
            convergence=convergence,
            thresholds=self.thresholds(),
        )


def run_moalo(
    scenario: Scenario,
    params: AlgoParams,
    init: list[Solution] | None = None,
    on_iteration: IterationCallback | None = None,
) -> Archive:
    return MOALO(scenario, params).run(init=init, on_iteration=on_iteration).archive
