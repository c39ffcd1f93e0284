"""Shared types for the multi-objective optimizers."""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.objective import ObjectiveVector, Solution
from src.scenario import Scenario

if TYPE_CHECKING:
    from config.config import Settings
    from src.optimizers.rsi import ThresholdSnapshot
    from src.services.evaluation_service import EvaluationService

# RNG stream labels; every random draw of a run comes from one of these.
STREAM_INIT = 0
STREAM_ARCHIVE = 1
STREAM_MEMBER = 2

# (t / t_max threshold, exponent w) of the guide-walk boundary shrinking
DEFAULT_SHRINK_SCHEDULE = ((0.1, 2), (0.5, 3), (0.75, 4), (0.9, 5), (0.95, 6))


class ArchiveEmptyError(Exception):
    """Raised when an operation needs at least one archive entry."""

    pass


class AlgoParams(BaseModel):
    """Optimizer hyper-parameters."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    population_size: int = Field(default=50, ge=2)
    max_iterations: int = Field(default=300, ge=1)
    archive_capacity: int | None = Field(default=None, ge=1)
    niche_radius_fraction: float = Field(default=0.05, gt=0.0, le=1.0)
    shrink_schedule: tuple[tuple[float, int], ...] = DEFAULT_SHRINK_SCHEDULE
    delta1: float = Field(default=0.9, gt=0.0, le=1.0)
    delta2: float = Field(default=0.9, gt=0.0, le=1.0)
    delta3: float = Field(default=0.9, gt=0.0, le=1.0)
    walk_step_scale: float = Field(default=5.0, gt=0.0)
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def check_schedule(self) -> AlgoParams:
        fractions = [fraction for fraction, _ in self.shrink_schedule]
        if fractions != sorted(fractions) or any(not 0 <= f < 1 for f in fractions):
            raise ValueError("shrink schedule thresholds must be increasing within [0, 1)")
        return self

    @property
    def capacity(self) -> int:
        return self.archive_capacity or self.population_size

    @property
    def deltas(self) -> tuple[float, float, float]:
        return (self.delta1, self.delta2, self.delta3)

    @classmethod
    def from_settings(cls, settings: Settings, **overrides: Any) -> AlgoParams:
        """Build from application settings; ``None`` overrides are ignored."""
        values = {
            "population_size": settings.population_size,
            "max_iterations": settings.max_iterations,
            "archive_capacity": settings.archive_capacity,
            "niche_radius_fraction": settings.niche_radius_fraction,
            "delta1": settings.delta1,
            "delta2": settings.delta2,
            "delta3": settings.delta3,
            "walk_step_scale": settings.walk_step_scale,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass
class ArchiveEntry:
    solution: Solution
    objectives: ObjectiveVector

    def to_dict(self) -> dict[str, Any]:
        return {"solution": self.solution.to_dict(), "objectives": self.objectives.to_dict()}


@dataclass
class Archive:
    """Bounded set of mutually non-dominated entries."""

    capacity: int
    entries: list[ArchiveEntry] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[ArchiveEntry]:
        return iter(self.entries)

    def __getitem__(self, index: int) -> ArchiveEntry:
        return self.entries[index]

    def objective_matrix(self) -> np.ndarray:
        """(n, 3) matrix of g1, g2, g3."""
        if not self.entries:
            return np.empty((0, 3))
        return np.array([e.objectives.values for e in self.entries])

    def to_list(self) -> list[dict[str, Any]]:
        return [entry.to_dict() for entry in self.entries]


@dataclass(frozen=True)
class ConvergenceRow:
    iteration: int
    best_f1: float
    best_f2: float
    best_f3: float
    archive_size: int

    @classmethod
    def from_archive(cls, iteration: int, archive: Archive) -> ConvergenceRow:
        values = archive.objective_matrix()
        return cls(
            iteration=iteration,
            best_f1=float(-values[:, 0].min()),
            best_f2=float(values[:, 1].min()),
            best_f3=float(values[:, 2].min()),
            archive_size=len(archive),
        )

    def as_row(self) -> list[Any]:
        return [self.iteration, self.best_f1, self.best_f2, self.best_f3, self.archive_size]


@dataclass
class RunResult:
    algorithm_id: str
    params: AlgoParams
    archive: Archive
    convergence: list[ConvergenceRow] = field(default_factory=list)
    thresholds: list[ThresholdSnapshot] = field(default_factory=list)


IterationCallback = Callable[[int, Archive], None]


class BaseOptimizer(ABC):
    """Abstract base class for archive-based multi-objective optimizers."""

    def __init__(
        self,
        scenario: Scenario,
        params: AlgoParams,
        evaluator: EvaluationService | None = None,
    ):
        from src.services.evaluation_service import EvaluationService

        self.scenario = scenario
        self.params = params
        self.evaluator = evaluator or EvaluationService(scenario)

    @property
    @abstractmethod
    def algorithm_id(self) -> str:
        """Return the identifier used on the command line."""
        ...

    @abstractmethod
    def run(
        self,
        init: list[Solution] | None = None,
        on_iteration: IterationCallback | None = None,
    ) -> RunResult:
        """Run the optimizer to completion.

        Args:
            init: Optional initial population replacing the algorithm's own
            on_iteration: Called with (t, archive) after each archive update

        Returns:
            RunResult with the final archive and per-iteration logs
        """
        ...
