"""Rotary-wing propulsion power and reconfiguration energy of a swarm move."""

from dataclasses import dataclass

import numpy as np

from src.scenario import EnergyParams


class SolutionShapeError(ValueError):
    """Raised when position or weight arrays do not match the expected shape."""

    pass


@dataclass(frozen=True)
class FlightLeg:
    """Horizontal-then-vertical move between two points at rest."""

    start: tuple[float, float, float]
    end: tuple[float, float, float]

    @property
    def horizontal_distance(self) -> float:
        return float(np.hypot(self.end[0] - self.start[0], self.end[1] - self.start[1]))

    @property
    def vertical_displacement(self) -> float:
        return float(self.end[2] - self.start[2])


def propulsion_power(v, params: EnergyParams):
    """Propulsion power (W) at horizontal speed ``v`` (scalar or array)."""
    v = np.asarray(v, dtype=float)
    blade = params.blade_power * (1 + 3 * v**2 / params.tip_speed**2)
    induced = params.induced_power * np.sqrt(
        np.sqrt(1 + v**4 / (4 * params.hover_velocity**4)) - v**2 / (2 * params.hover_velocity**2)
    )
    parasite = (
        0.5 * params.drag_ratio * params.air_density * params.solidity * params.disc_area * v**3
    )
    power = blade + induced + parasite
    return float(power) if power.ndim == 0 else power


def _leg_energy(horizontal, vertical, params: EnergyParams):
    cruise = (
        propulsion_power(params.horizontal_speed, params) * horizontal / params.horizontal_speed
    )
    climb = propulsion_power(0.0, params) * np.abs(vertical) / params.vertical_speed
    potential = params.mass * params.gravity * vertical
    return np.maximum(cruise + climb + potential, 0.0)


def flight_energy(leg: FlightLeg, params: EnergyParams) -> float:
    """Energy (J) of one leg; a descent never yields a negative total."""
    return float(_leg_energy(leg.horizontal_distance, leg.vertical_displacement, params))


def reconfiguration_energy(original: np.ndarray, target: np.ndarray, params: EnergyParams) -> float:
    """Total energy for every UAV to fly from its original slot to the same slot in ``target``.

    Raises:
        SolutionShapeError: If the two position sets differ in shape
    """
    original = np.asarray(original, dtype=float)
    target = np.asarray(target, dtype=float)
    if original.shape != target.shape or original.shape[-1:] != (3,):
        raise SolutionShapeError(
            f"position shapes differ: original {original.shape}, target {target.shape}"
        )
    delta = target - original
    horizontal = np.hypot(delta[..., 0], delta[..., 1])
    return float(np.sum(_leg_energy(horizontal, delta[..., 2], params)))
