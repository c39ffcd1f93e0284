"""MOALO-RSI: random-walk initialisation, sorting-based archive evolution and integer update."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from loguru import logger

from src.objective import ObjectiveVector, Solution, repair
from src.optimizers.archive import crowd_out, nondominated
from src.optimizers.base import (
    STREAM_ARCHIVE,
    STREAM_INIT,
    AlgoParams,
    Archive,
    ArchiveEmptyError,
    ArchiveEntry,
    IterationCallback,
    RunResult,
)
from src.optimizers.moalo import MOALO
from src.scenario import Scenario
from src.utils import derive_rng

OBJECTIVE_NAMES = ("f1", "f2", "f3")


@dataclass(frozen=True)
class ThresholdSnapshot:
    """One sorting-evolution pass: snapshot values, thresholds and removals."""

    iteration: int
    active_objective: int  # 0, 1 or 2
    g1_min: float
    g2_min: float
    g3_max: float
    zeta: tuple[float, float, float]
    removed: int

    def as_row(self) -> list:
        return [
            self.iteration,
            OBJECTIVE_NAMES[self.active_objective],
            self.g1_min,
            self.g2_min,
            self.g3_max,
            *self.zeta,
            self.removed,
        ]


THRESHOLD_HEADER = [
    "iteration",
    "active_objective",
    "g1_min",
    "g2_min",
    "g3_max",
    "zeta1",
    "zeta2",
    "zeta3",
    "removed",
]


def walk_offsets(coins: np.ndarray) -> np.ndarray:
    """Cumulative walk [0, s1, s1 + s2, ...] from 0/1 coin outcomes along axis 0."""
    coins = np.asarray(coins)
    steps = 2 * coins - 1
    zeros = np.zeros((1, *coins.shape[1:]), dtype=float)
    return np.concatenate([zeros, np.cumsum(steps, axis=0, dtype=float)], axis=0)


def random_walk_init(
    scenario: Scenario, size: int, rng: np.random.Generator, step_scale: float = 5.0
) -> list[Solution]:
    """Population spread by a random walk that starts at the original positions.

    Candidate n sits at P^r plus ``step_scale`` times the walk after n - 1
    steps, so the first candidate stays exactly at P^r.
    """
    if size < 1:
        raise ValueError(f"population size must be at least 1, got {size}")
    n_uav = scenario.n_uav
    origin = scenario.original_positions
    coins = rng.integers(0, 2, size=(size, *origin.shape))
    offsets = walk_offsets(coins)

    population = []
    for n in range(size):
        receivers = np.clip(np.round(rng.random(2) * n_uav), 1, n_uav).astype(np.int64) - 1
        candidate = Solution(
            positions=origin + step_scale * offsets[n],
            weights=rng.random((2, n_uav)),
            receivers=receivers,
        )
        population.append(repair(candidate, scenario))
    return population


def threshold(snapshot: float, delta: float) -> float:
    """Scale a minimum toward the better side: s * delta for s <= 0, s / delta otherwise."""
    return snapshot * delta if snapshot <= 0 else snapshot / delta


def sorting_evolution(
    archive: Archive,
    population: list[ArchiveEntry],
    t: int,
    deltas: tuple[float, float, float],
    rng: np.random.Generator,
    radius_fraction: float = 0.05,
) -> tuple[Archive, ThresholdSnapshot]:
    """Merge, drop dominated entries, then filter one objective chosen by t mod 3.

    Entries worse than the objective's threshold are removed; if none would
    remain, the best entry in that objective is kept. Capacity is then enforced
    by crowding, never evicting that best entry.
    """
    survivors = nondominated(archive.entries + list(population))
    if not survivors:
        raise ArchiveEmptyError("sorting evolution needs at least one entry")
    values = np.array([e.objectives.values for e in survivors])

    g1_min, g2_min, g3_max = (
        float(values[:, 0].min()),
        float(values[:, 1].min()),
        float(values[:, 2].max()),
    )
    zeta = (threshold(g1_min, deltas[0]), threshold(g2_min, deltas[1]), g3_max * deltas[2])
    active = t % 3

    keep = values[:, active] <= zeta[active]
    if not np.any(keep):
        logger.warning(
            f"Threshold on {OBJECTIVE_NAMES[active]} would empty the archive; "
            "keeping the best entry"
        )
        keep[int(np.argmin(values[:, active]))] = True
    filtered = [entry for entry, k in zip(survivors, keep) if k]
    best = int(np.argmin([e.objectives.values[active] for e in filtered]))

    snapshot = ThresholdSnapshot(
        iteration=t,
        active_objective=active,
        g1_min=g1_min,
        g2_min=g2_min,
        g3_max=g3_max,
        zeta=zeta,
        removed=int(len(survivors) - len(filtered)),
    )
    kept = crowd_out(filtered, archive.capacity, rng, radius_fraction, protected=best)
    return Archive(archive.capacity, kept), snapshot


def integer_update(
    u_archive: np.ndarray, u_old: np.ndarray, n_uav: int, rng: np.random.Generator
) -> np.ndarray:
    """Receiver pair from the archive, the previous candidate or fresh, one third each."""
    draw = rng.random()
    if draw < 1 / 3:
        return np.array(u_archive, dtype=np.int64)
    if draw < 2 / 3:
        return np.array(u_old, dtype=np.int64)
    return rng.integers(0, n_uav, size=2)


def final_rank(entry: ArchiveEntry) -> tuple[bool, float, float, float]:
    """Sort key of the deployment choice: feasible first, then g1, g3 and g2."""
    o: ObjectiveVector = entry.objectives
    return (not o.feasible, o.g1, o.g3, o.g2)


def select_final(archive: Archive) -> ArchiveEntry:
    """Entry with the best secrecy capacity; ties go to lower energy, then lower SLL.

    Raises:
        ArchiveEmptyError: If the archive is empty
    """
    if len(archive) == 0:
        raise ArchiveEmptyError("cannot select a final solution from an empty archive")
    return min(archive.entries, key=final_rank)


def keep_elite(
    archive: Archive, elite: ArchiveEntry, rng: np.random.Generator, radius_fraction: float
) -> Archive:
    """Put the elite back into a filtered archive, evicting by crowding if it is full.

    The elite has the lowest ``final_rank`` of every entry seen so far, so no
    archive entry dominates it.
    """
    if any(entry is elite for entry in archive):
        return archive
    merged = nondominated([elite, *archive.entries])
    kept = crowd_out(merged, archive.capacity, rng, radius_fraction, protected=0)
    return Archive(archive.capacity, kept)


class MOALORSI(MOALO):
    """MOALO with random-walk initialisation and sorting-based archive evolution.

    Either enhancement can be switched off; with both off the run matches MOALO.
    The threshold filter rotates through the objectives and would otherwise drop
    the highest-secrecy entry on an energy pass, so the best entry by
    ``final_rank`` seen so far is carried through every filtered archive.
    """

    def __init__(
        self,
        scenario: Scenario,
        params: AlgoParams,
        evaluator=None,
        use_random_walk_init: bool = True,
        use_sorting_filter: bool = True,
    ):
        super().__init__(scenario, params, evaluator)
        self.use_random_walk_init = use_random_walk_init
        self.use_sorting_filter = use_sorting_filter
        self._snapshots: list[ThresholdSnapshot] = []
        self._elite: ArchiveEntry | None = None

    @property
    def algorithm_id(self) -> str:
        return "moalo-rsi"

    def initial_population(self) -> list[Solution]:
        if not self.use_random_walk_init:
            return super().initial_population()
        rng = derive_rng(self.params.seed, STREAM_INIT)
        return random_walk_init(
            self.scenario, self.params.population_size, rng, self.params.walk_step_scale
        )

    def evolve_archive(self, archive: Archive, evaluated: list[ArchiveEntry], t: int) -> Archive:
        if not self.use_sorting_filter:
            return super().evolve_archive(archive, evaluated, t)
        rng = derive_rng(self.params.seed, STREAM_ARCHIVE, t)
        for entry in (*archive.entries, *evaluated):
            if self._elite is None or final_rank(entry) < final_rank(self._elite):
                self._elite = entry
        # mod-3 rotation counts iterations from 0
        updated, snapshot = sorting_evolution(
            archive,
            evaluated,
            t - 1,
            self.params.deltas,
            rng,
            self.params.niche_radius_fraction,
        )
        self._snapshots.append(replace(snapshot, iteration=t))
        if self._elite is None:
            return updated
        return keep_elite(updated, self._elite, rng, self.params.niche_radius_fraction)

    def thresholds(self) -> list[ThresholdSnapshot]:
        return list(self._snapshots)

    def run(
        self,
        init: list[Solution] | None = None,
        on_iteration: IterationCallback | None = None,
    ) -> RunResult:
        self._snapshots = []
        self._elite = None
        return super().run(init=init, on_iteration=on_iteration)


def run_moalo_rsi(
    scenario: Scenario,
    params: AlgoParams,
    on_iteration: IterationCallback | None = None,
) -> Archive:
    return MOALORSI(scenario, params).run(on_iteration=on_iteration).archive
