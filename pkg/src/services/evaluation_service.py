"""Evaluation service - scores candidate populations, optionally on a thread pool."""

import os
from concurrent.futures import ThreadPoolExecutor

from loguru import logger

from src.beamforming import DirectionGrid, direction_grid
from src.objective import ObjectiveVector, Solution, evaluate
from src.scenario import Scenario


class EvaluationService:
    """Objective evaluation for whole populations.

    Results always come back in submission order, so the thread count never
    changes what an optimizer sees.
    """

    def __init__(
        self,
        scenario: Scenario,
        threads: int | None = None,
        grid: DirectionGrid | None = None,
    ):
        self.scenario = scenario
        self.threads = threads or os.cpu_count() or 1
        self.grid = grid or direction_grid(scenario.array.d_theta, scenario.array.d_phi)
        self.evaluations = 0

    def evaluate(self, solution: Solution) -> ObjectiveVector:
        return evaluate(self.scenario, solution, self.grid)

    def evaluate_population(self, population: list[Solution]) -> list[ObjectiveVector]:
        """Evaluate every candidate, preserving order."""
        if self.threads <= 1 or len(population) <= 1:
            results = [self.evaluate(s) for s in population]
        else:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                results = list(pool.map(self.evaluate, population))
        self.evaluations += len(results)
        logger.debug(f"Evaluated {len(results)} candidates ({self.evaluations} total)")
        return results
