"""Decision variables, objective evaluation, constraint handling and Pareto dominance."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np
from loguru import logger

from src.beamforming import DirectionGrid, direction_grid, max_sll, ratio_to_db
from src.channel import (
    SecrecyReport,
    SteeredArray,
    link_geometry,
    secrecy_from_arrays,
    steered_arrays,
)
from src.energy import SolutionShapeError, reconfiguration_energy
from src.scenario import Scenario


@dataclass(eq=False)
class Solution:
    """UAV positions P (2, N, 3), excitation weights (2, N) and receiver indices (2,).

    ``receivers[0]`` is the receiving UAV in swarm 2 for swarm 1's transmission,
    ``receivers[1]`` the receiving UAV in swarm 1. Indices are 0-based.
    """

    positions: np.ndarray
    weights: np.ndarray
    receivers: np.ndarray

    def __post_init__(self):
        self.positions = np.array(self.positions, dtype=float)
        self.weights = np.array(self.weights, dtype=float)
        self.receivers = np.array(self.receivers, dtype=np.int64).reshape(-1)
        if self.positions.ndim != 3 or self.positions.shape[0] != 2 or self.positions.shape[2] != 3:
            raise SolutionShapeError(f"positions must be (2, N, 3), got {self.positions.shape}")
        if self.weights.shape != self.positions.shape[:2]:
            raise SolutionShapeError(
                f"weights must be {self.positions.shape[:2]}, got {self.weights.shape}"
            )
        if self.receivers.shape != (2,):
            raise SolutionShapeError(f"expected 2 receiver indices, got {self.receivers.shape}")

    @property
    def n_uav(self) -> int:
        return int(self.positions.shape[1])

    def check_against(self, scenario: Scenario) -> Solution:
        """Raise SolutionShapeError unless the solution fits the scenario."""
        if self.n_uav != scenario.n_uav:
            raise SolutionShapeError(
                f"solution has {self.n_uav} UAVs per swarm, scenario has {scenario.n_uav}"
            )
        if np.any(self.receivers < 0) or np.any(self.receivers >= self.n_uav):
            raise SolutionShapeError(f"receiver indices {self.receivers.tolist()} out of range")
        return self

    def continuous(self) -> np.ndarray:
        """Positions then weights as one flat vector."""
        return np.concatenate([self.positions.ravel(), self.weights.ravel()])

    @classmethod
    def from_continuous(cls, vector: np.ndarray, receivers: np.ndarray, n_uav: int) -> Solution:
        split = 2 * n_uav * 3
        return cls(
            positions=vector[:split].reshape(2, n_uav, 3),
            weights=vector[split:].reshape(2, n_uav),
            receivers=receivers,
        )

    def copy(self) -> Solution:
        return Solution(self.positions.copy(), self.weights.copy(), self.receivers.copy())

    def same_as(self, other: Solution) -> bool:
        return (
            np.array_equal(self.positions, other.positions)
            and np.array_equal(self.weights, other.weights)
            and np.array_equal(self.receivers, other.receivers)
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "positions": self.positions.tolist(),
            "weights": self.weights.tolist(),
            "receivers": [int(r) for r in self.receivers],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Solution:
        try:
            return cls(data["positions"], data["weights"], data["receivers"])
        except KeyError as e:
            raise SolutionShapeError(f"solution is missing field {e}") from e
        except (TypeError, ValueError) as e:
            raise SolutionShapeError(f"malformed solution: {e}") from e


def continuous_bounds(scenario: Scenario) -> tuple[np.ndarray, np.ndarray]:
    """Lower and upper bounds of ``Solution.continuous()`` for a scenario."""
    lower, upper = scenario.position_bounds()
    n_weights = 2 * scenario.n_uav
    return (
        np.concatenate([lower.ravel(), np.zeros(n_weights)]),
        np.concatenate([upper.ravel(), np.ones(n_weights)]),
    )


@dataclass(frozen=True)
class ObjectiveVector:
    """Minimized objectives (-C_KE, max SLL in dB, energy in J) and constraint deficit."""

    g1: float
    g2: float
    g3: float
    violation: float = 0.0
    report: SecrecyReport | None = field(default=None, compare=False, repr=False)

    @property
    def feasible(self) -> bool:
        return self.violation == 0.0

    @property
    def f1(self) -> float:
        return -self.g1

    @property
    def values(self) -> np.ndarray:
        return np.array([self.g1, self.g2, self.g3])

    def to_dict(self) -> dict[str, Any]:
        payload = {
            "g1": self.g1,
            "g2": self.g2,
            "g3": self.g3,
            "f1": self.f1,
            "feasible": self.feasible,
            "violation": self.violation,
        }
        if self.report is not None:
            payload["secrecy"] = self.report.to_dict()
        return payload

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ObjectiveVector:
        return cls(
            g1=float(data["g1"]),
            g2=float(data["g2"]),
            g3=float(data["g3"]),
            violation=float(data.get("violation", 0.0)),
        )


def min_separation_violation(positions: np.ndarray, d_min: float) -> float:
    """Largest shortfall of the closest intra-swarm pair below ``d_min`` (0 if none)."""
    positions = np.asarray(positions, dtype=float)
    if positions.ndim == 2:
        positions = positions[np.newaxis]
    deficit = 0.0
    for swarm in positions:
        if len(swarm) < 2:
            continue
        diff = swarm[:, np.newaxis, :] - swarm[np.newaxis, :, :]
        distances = np.linalg.norm(diff, axis=-1)
        closest = float(np.min(distances[np.triu_indices(len(swarm), k=1)]))
        deficit = max(deficit, d_min - closest)
    return max(0.0, deficit)


def sidelobe_level_db(
    scenario: Scenario, arrays: tuple[SteeredArray, SteeredArray], grid: DirectionGrid
) -> float:
    """Worse of the two arrays' maximum sidelobe levels in dB."""
    levels = []
    for array in arrays:
        # a silent array has no beam to measure; it is scored at 0 dB
        if not np.any(array.config.weights > 0):
            logger.warning("Zero-power array has no sidelobe structure; reporting 0 dB")
            levels.append(0.0)
            continue
        aim = link_geometry(array.config.center, array.receiver)
        ratio = max_sll(array.config, aim.theta, aim.phi, grid, scenario.array.mainlobe)
        levels.append(ratio_to_db(ratio))
    return max(levels)


def evaluate(
    scenario: Scenario, solution: Solution, grid: DirectionGrid | None = None
) -> ObjectiveVector:
    """Evaluate a shape-valid solution.

    Args:
        scenario: World the solution is placed in
        solution: Candidate; out-of-box values are not repaired here
        grid: Direction grid, defaults to the scenario's resolution

    Returns:
        ObjectiveVector with the known-eavesdropper secrecy report attached
    """
    solution.check_against(scenario)
    grid = grid or direction_grid(scenario.array.d_theta, scenario.array.d_phi)

    arrays = steered_arrays(scenario, solution.positions, solution.weights, solution.receivers)
    report = secrecy_from_arrays(scenario, arrays, "known", grid)
    return ObjectiveVector(
        g1=-report.capacity,
        g2=sidelobe_level_db(scenario, arrays, grid),
        g3=reconfiguration_energy(scenario.original_positions, solution.positions, scenario.energy),
        violation=min_separation_violation(solution.positions, scenario.d_min),
        report=report,
    )


def dominates(a: ObjectiveVector, b: ObjectiveVector) -> bool:
    """Feasibility-first Pareto dominance of ``a`` over ``b``."""
    if a.feasible != b.feasible:
        return a.feasible
    if not a.feasible:
        return a.violation < b.violation
    va, vb = a.values, b.values
    return bool(np.all(va <= vb) and np.any(va < vb))


def repair(solution: Solution, scenario: Scenario) -> Solution:
    """Clamp positions into the swarm areas and weights into [0, 1]; wrap receivers.

    Minimum separation is left to the feasibility-first dominance.
    """
    lower, upper = scenario.position_bounds()
    return Solution(
        positions=np.clip(solution.positions, lower, upper),
        weights=np.clip(solution.weights, 0.0, 1.0),
        receivers=np.mod(solution.receivers, scenario.n_uav),
    )
