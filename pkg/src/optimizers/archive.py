"""Pareto archive maintenance: dominance filtering, niche counts, crowding and roulette."""

import numpy as np

from src.objective import ObjectiveVector
from src.optimizers.base import Archive, ArchiveEmptyError, ArchiveEntry


def dominance_matrix(objectives: list[ObjectiveVector]) -> np.ndarray:
    """Boolean (n, n) matrix whose [i, j] is True when entry i dominates entry j.

    Uses feasibility-first dominance, vectorized over all pairs.
    """
    if not objectives:
        return np.zeros((0, 0), dtype=bool)
    values = np.array([o.values for o in objectives])
    feasible = np.array([o.feasible for o in objectives])
    violation = np.array([o.violation for o in objectives])

    no_worse = np.all(values[:, None, :] <= values[None, :, :], axis=-1)
    better = np.any(values[:, None, :] < values[None, :, :], axis=-1)
    pareto = no_worse & better

    fi = feasible[:, None]
    fj = feasible[None, :]
    return np.where(
        fi & fj,
        pareto,
        np.where(
            fi & ~fj, True, np.where(~fi & ~fj, violation[:, None] < violation[None, :], False)
        ),
    )


def nondominated(entries: list[ArchiveEntry]) -> list[ArchiveEntry]:
    """Entries not dominated by any other entry, in their original order."""
    if not entries:
        return []
    dominated = dominance_matrix([e.objectives for e in entries]).any(axis=0)
    return [entry for entry, out in zip(entries, dominated) if not out]


def neighbourhood(values: np.ndarray, radius_fraction: float) -> np.ndarray:
    """Boolean neighbour matrix in min-max normalized objective space (self excluded)."""
    if len(values) == 0:
        return np.zeros((0, 0), dtype=bool)
    span = values.max(axis=0) - values.min(axis=0)
    span[span == 0] = 1.0
    scaled = (values - values.min(axis=0)) / span
    distance = np.linalg.norm(scaled[:, None, :] - scaled[None, :, :], axis=-1)
    within = distance < radius_fraction
    np.fill_diagonal(within, False)
    return within


def niche_counts(values: np.ndarray, radius_fraction: float) -> np.ndarray:
    """Number of neighbours of each entry within the niche radius."""
    return neighbourhood(values, radius_fraction).sum(axis=1)


def crowd_out(
    entries: list[ArchiveEntry],
    capacity: int,
    rng: np.random.Generator,
    radius_fraction: float,
    protected: int | None = None,
) -> list[ArchiveEntry]:
    """Remove entries until ``capacity`` remain, by roulette on niche count.

    Neighbour counts are updated after each removal instead of being recomputed.
    The ``protected`` index is never removed.
    """
    if len(entries) <= capacity:
        return list(entries)
    within = neighbourhood(np.array([e.objectives.values for e in entries]), radius_fraction)
    counts = within.sum(axis=1).astype(float)
    alive = np.ones(len(entries), dtype=bool)

    while alive.sum() > capacity:
        eligible = alive.copy()
        if protected is not None:
            eligible[protected] = False
        candidates = np.flatnonzero(eligible)
        weights = counts[candidates]
        if weights.sum() > 0:
            victim = rng.choice(candidates, p=weights / weights.sum())
        else:
            victim = rng.choice(candidates)
        alive[victim] = False
        counts -= within[victim]
        counts[victim] = 0.0

    return [entry for entry, keep in zip(entries, alive) if keep]


def update_archive(
    archive: Archive,
    population: list[ArchiveEntry],
    rng: np.random.Generator,
    radius_fraction: float,
) -> Archive:
    """Merge the population in, drop dominated entries and crowd down to capacity."""
    survivors = nondominated(archive.entries + list(population))
    return Archive(archive.capacity, crowd_out(survivors, archive.capacity, rng, radius_fraction))


def selection_weights(archive: Archive, radius_fraction: float) -> np.ndarray:
    """Roulette probabilities favouring sparse regions: proportional to 1 / (1 + niche count)."""
    if len(archive) == 0:
        raise ArchiveEmptyError("cannot select from an empty archive")
    inverse = 1.0 / (1.0 + niche_counts(archive.objective_matrix(), radius_fraction))
    return inverse / inverse.sum()


def roulette_select(
    archive: Archive,
    rng: np.random.Generator,
    radius_fraction: float = 0.05,
    weights: np.ndarray | None = None,
) -> ArchiveEntry:
    """Draw one entry; pass precomputed ``weights`` to reuse them within an iteration.

    Raises:
        ArchiveEmptyError: If the archive is empty
    """
    if len(archive) == 0:
        raise ArchiveEmptyError("cannot select from an empty archive")
    if weights is None:
        weights = selection_weights(archive, radius_fraction)
    return archive[int(rng.choice(len(archive), p=weights))]
