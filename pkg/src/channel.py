"""Link budgets: air-to-air rate, colluding eavesdropper rate and two-way secrecy capacity."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Literal

import numpy as np
from loguru import logger

from src.beamforming import (
    ArrayConfig,
    DirectionGrid,
    ZeroPowerArrayError,
    direction_grid,
    gains_toward,
    steering_phases,
)
from src.scenario import CommParams, Scenario

if TYPE_CHECKING:
    from src.objective import Solution

EavesdropperSet = Literal["known", "all"]


class ChannelError(Exception):
    """Raised for degenerate link geometry or invalid SNR inputs."""

    pass


@dataclass(frozen=True)
class LinkGeometry:
    """Geometry from an array centre to one or more nodes (array fields for many)."""

    distance: float | np.ndarray
    elevation: float | np.ndarray  # rad, above the horizontal at the node
    theta: float | np.ndarray
    phi: float | np.ndarray

    @property
    def elevation_deg(self) -> float | np.ndarray:
        return np.degrees(self.elevation)

    @property
    def unit_vectors(self) -> np.ndarray:
        theta = np.asarray(self.theta)
        phi = np.asarray(self.phi)
        return np.stack(
            [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1
        )


def link_geometry(origin: np.ndarray, nodes: np.ndarray) -> LinkGeometry:
    """Distance, elevation and direction from ``origin`` to each node.

    A single node (shape (3,)) gives scalar fields.
    """
    nodes = np.asarray(nodes, dtype=float)
    vector = nodes - np.asarray(origin, dtype=float)
    distance = np.linalg.norm(vector, axis=-1)
    if np.any(distance <= 0):
        raise ChannelError("link distance must be positive")
    theta = np.arccos(np.clip(vector[..., 2] / distance, -1.0, 1.0))
    phi = np.arctan2(vector[..., 1], vector[..., 0])
    elevation = np.arcsin(np.clip(np.abs(vector[..., 2]) / distance, 0.0, 1.0))
    if nodes.ndim == 1:
        return LinkGeometry(float(distance), float(elevation), float(theta), float(phi))
    return LinkGeometry(distance, elevation, theta, phi)


def los_probability(elevation_deg: float | np.ndarray, b1: float, b2: float):
    """Line-of-sight probability for an elevation angle in degrees."""
    return 1.0 / (1.0 + b1 * np.exp(-b2 * (np.asarray(elevation_deg, dtype=float) - b1)))


def _path_gain(distance, gain, comm: CommParams):
    return comm.transmit_power * comm.k0 * np.asarray(gain) * np.asarray(distance) ** (
        -comm.path_loss_exponent
    )


def eavesdropper_snr(geom: LinkGeometry, gain, comm: CommParams):
    """SNR at a ground eavesdropper, averaged over LoS and NLoS attenuation."""
    if np.any(np.asarray(geom.distance) <= 0):
        raise ChannelError("eavesdropper distance must be positive")
    if np.any(np.asarray(gain) < 0):
        raise ChannelError("gain must be non-negative")
    p_los = los_probability(geom.elevation_deg, comm.b1, comm.b2)
    attenuation = p_los * comm.mu_los + (1.0 - p_los) * comm.mu_nlos
    return _path_gain(geom.distance, gain, comm) / (attenuation * comm.noise_power)


def mrc_combined_snr(snrs) -> float:
    """Combined SNR of colluding eavesdroppers under maximum ratio combining."""
    values = np.asarray(snrs, dtype=float).reshape(-1)
    if np.any(values < 0):
        raise ChannelError("SNRs must be non-negative")
    return float(np.sum(values))


def shannon_rate(snr, bandwidth: float):
    return bandwidth * np.log2(1.0 + np.asarray(snr))


def a2a_rate(geom: LinkGeometry, gain: float, comm: CommParams) -> float:
    """Rate of the deterministic LoS link between the two arrays."""
    if np.any(np.asarray(geom.distance) <= 0):
        raise ChannelError("link distance must be positive")
    if gain < 0:
        raise ChannelError("gain must be non-negative")
    snr = _path_gain(geom.distance, gain, comm) / comm.noise_power
    return float(shannon_rate(snr, comm.bandwidth))


@dataclass(frozen=True, eq=False)
class SteeredArray:
    """One transmitting array and the position of its intended receiver."""

    config: ArrayConfig
    receiver: np.ndarray

    def with_phases(self, phases: np.ndarray) -> SteeredArray:
        return SteeredArray(self.config.with_phases(phases), self.receiver)


def steered_arrays(
    scenario: Scenario,
    positions: np.ndarray,
    weights: np.ndarray,
    receivers: np.ndarray,
    nominal_positions: np.ndarray | None = None,
) -> tuple[SteeredArray, SteeredArray]:
    """Build both transmitting arrays, each steered toward its receiver.

    ``receivers[0]`` indexes the receiving UAV in swarm 2 (target of swarm 1) and
    ``receivers[1]`` the one in swarm 1. Steering phases come from
    ``nominal_positions`` when given, so displaced UAVs keep their planned phases.
    """
    nominal = positions if nominal_positions is None else nominal_positions
    arrays = []
    for i in range(2):
        other = 1 - i
        receiver = positions[other][int(receivers[i])]
        planned_rx = nominal[other][int(receivers[i])]
        planned = ArrayConfig.unsteered(nominal[i], weights[i], scenario.comm.wavelength)
        aim = link_geometry(planned.center, planned_rx)
        phases = steering_phases(planned, aim.theta, aim.phi)
        config = ArrayConfig(positions[i], weights[i], phases, scenario.comm.wavelength)
        arrays.append(SteeredArray(config, np.asarray(receiver, dtype=float)))
    return arrays[0], arrays[1]


@dataclass(frozen=True)
class SecrecyReport:
    """Per-direction rates (bps) and the resulting minimum secrecy capacity."""

    eaves_set: EavesdropperSet
    a2a_rates: tuple[float, float]
    eavesdropper_rates: tuple[float, float]
    a2a_gains: tuple[float, float]

    @property
    def directional_secrecy(self) -> tuple[float, float]:
        return (
            self.a2a_rates[0] - self.eavesdropper_rates[0],
            self.a2a_rates[1] - self.eavesdropper_rates[1],
        )

    @property
    def capacity(self) -> float:
        """C_KE for the known set, C_E for all eavesdroppers."""
        return min(self.directional_secrecy)

    def to_dict(self) -> dict:
        key = "c_ke_bps" if self.eaves_set == "known" else "c_e_bps"
        return {
            "eaves_set": self.eaves_set,
            "a2a_rates_bps": list(self.a2a_rates),
            "eavesdropper_rates_bps": list(self.eavesdropper_rates),
            "a2a_gains_db": [10 * math.log10(g) if g > 0 else None for g in self.a2a_gains],
            key: self.capacity,
        }


def eavesdroppers_for(scenario: Scenario, eaves_set: EavesdropperSet) -> np.ndarray:
    if eaves_set == "known":
        return scenario.known_eavesdroppers
    if eaves_set == "all":
        return scenario.all_eavesdroppers
    raise ValueError(f"Unknown eavesdropper set '{eaves_set}'. Use 'known' or 'all'")


def secrecy_from_arrays(
    scenario: Scenario,
    arrays: tuple[SteeredArray, SteeredArray],
    eaves_set: EavesdropperSet = "known",
    grid: DirectionGrid | None = None,
) -> SecrecyReport:
    """Secrecy report for already-built arrays (nominal or perturbed)."""
    grid = grid or direction_grid(scenario.array.d_theta, scenario.array.d_phi)
    comm = scenario.comm
    eaves = eavesdroppers_for(scenario, eaves_set)

    a2a_rates, eaves_rates, a2a_gains = [], [], []
    for array in arrays:
        center = array.config.center
        rx = link_geometry(center, array.receiver)
        directions = rx.unit_vectors.reshape(1, 3)
        if len(eaves):
            eaves_geom = link_geometry(center, eaves)
            directions = np.vstack([directions, eaves_geom.unit_vectors])
        try:
            gains = gains_toward(array.config, directions, grid, comm.efficiency)
        except ZeroPowerArrayError:
            # all weights are zero: the swarm radiates nothing, so no one hears it
            logger.warning("Zero-power array transmits nothing; using zero gain")
            gains = np.zeros(len(directions))

        a2a_gains.append(float(gains[0]))
        a2a_rates.append(a2a_rate(rx, float(gains[0]), comm))
        if len(eaves):
            combined = mrc_combined_snr(eavesdropper_snr(eaves_geom, gains[1:], comm))
        else:
            combined = 0.0
        eaves_rates.append(float(shannon_rate(combined, comm.bandwidth)))

    return SecrecyReport(
        eaves_set=eaves_set,
        a2a_rates=(a2a_rates[0], a2a_rates[1]),
        eavesdropper_rates=(eaves_rates[0], eaves_rates[1]),
        a2a_gains=(a2a_gains[0], a2a_gains[1]),
    )


def secrecy_report(
    scenario: Scenario,
    solution: Solution,
    eaves_set: EavesdropperSet = "known",
    grid: DirectionGrid | None = None,
) -> SecrecyReport:
    """Two-way secrecy report of a solution against the chosen eavesdropper set."""
    arrays = steered_arrays(scenario, solution.positions, solution.weights, solution.receivers)
    return secrecy_from_arrays(scenario, arrays, eaves_set, grid)
