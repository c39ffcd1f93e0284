"""Array factor, steering, directivity gain and sidelobe scan of a UAV virtual antenna array.

Directions are (theta, phi) with theta the polar angle from +z and phi the azimuth
from +x. Element coordinates are taken relative to the array centre, the
arithmetic mean of the element positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path

import numpy as np

from src.utils import write_csv

TWO_PI = 2 * math.pi
DB_FLOOR = -300.0


class BeamformingError(Exception):
    """Base exception for array computations."""

    pass


class ZeroPowerArrayError(BeamformingError):
    """Raised when every excitation weight is zero."""

    def __init__(self, message: str = "zero-power array: all excitation weights are 0"):
        super().__init__(message)


class MainlobeExclusionError(BeamformingError):
    """Raised when the mainlobe exclusion region covers the whole grid."""

    pass


def wrap_phase(phases: np.ndarray) -> np.ndarray:
    """Wrap phases into [0, 2pi)."""
    wrapped = np.mod(phases, TWO_PI)
    return np.where(wrapped >= TWO_PI, 0.0, wrapped)


def unit_vector(theta: float | np.ndarray, phi: float | np.ndarray) -> np.ndarray:
    """Unit vector(s) for polar angle theta and azimuth phi, shaped (..., 3)."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    return np.stack(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1
    )


@dataclass(frozen=True, eq=False)
class ArrayConfig:
    """Element positions (m), excitation weights in [0, 1] and initial phases (rad)."""

    positions: np.ndarray
    weights: np.ndarray
    phases: np.ndarray
    wavelength: float

    def __post_init__(self):
        positions = np.array(self.positions, dtype=float).reshape(-1, 3)
        weights = np.array(self.weights, dtype=float).reshape(-1)
        phases = wrap_phase(np.array(self.phases, dtype=float).reshape(-1))
        if len(positions) < 1:
            raise BeamformingError("an array needs at least one element")
        if len(weights) != len(positions) or len(phases) != len(positions):
            raise BeamformingError(
                f"{len(positions)} elements but {len(weights)} weights and {len(phases)} phases"
            )
        if np.any(weights < 0) or np.any(weights > 1):
            raise BeamformingError("excitation weights must lie in [0, 1]")
        if not self.wavelength > 0:
            raise BeamformingError("wavelength must be positive")
        for name, value in (("positions", positions), ("weights", weights), ("phases", phases)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @classmethod
    def unsteered(cls, positions: np.ndarray, weights: np.ndarray, wavelength: float):
        positions = np.asarray(positions, dtype=float).reshape(-1, 3)
        return cls(positions, weights, np.zeros(len(positions)), wavelength)

    @property
    def wavenumber(self) -> float:
        return TWO_PI / self.wavelength

    @property
    def offsets(self) -> np.ndarray:
        return self.positions - self.positions.mean(axis=0)

    @property
    def center(self) -> np.ndarray:
        return self.positions.mean(axis=0)

    def with_phases(self, phases: np.ndarray) -> ArrayConfig:
        return replace(self, phases=phases)


@dataclass(frozen=True, eq=False)
class DirectionGrid:
    """Midpoint grid over the sphere with per-cell solid-angle weights."""

    d_theta: float
    d_phi: float
    theta: np.ndarray = field(init=False)
    phi: np.ndarray = field(init=False)
    cell_theta: np.ndarray = field(init=False)
    cell_phi: np.ndarray = field(init=False)
    directions: np.ndarray = field(init=False)
    solid_angle: np.ndarray = field(init=False)

    def __post_init__(self):
        n_theta = max(1, round(math.pi / self.d_theta))
        n_phi = max(1, round(TWO_PI / self.d_phi))
        step_theta = math.pi / n_theta
        step_phi = TWO_PI / n_phi
        theta = (np.arange(n_theta) + 0.5) * step_theta
        phi = -math.pi + (np.arange(n_phi) + 0.5) * step_phi
        cell_theta, cell_phi = (a.ravel() for a in np.meshgrid(theta, phi, indexing="ij"))
        values = {
            "theta": theta,
            "phi": phi,
            "cell_theta": cell_theta,
            "cell_phi": cell_phi,
            "directions": unit_vector(cell_theta, cell_phi),
            "solid_angle": np.sin(cell_theta) * step_theta * step_phi,
        }
        for name, value in values.items():
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def size(self) -> int:
        return len(self.cell_theta)


@lru_cache(maxsize=16)
def direction_grid(d_theta: float, d_phi: float) -> DirectionGrid:
    """Shared, immutable grid for a resolution."""
    return DirectionGrid(d_theta, d_phi)


def array_factor_at(config: ArrayConfig, directions: np.ndarray) -> np.ndarray:
    """|AF| toward unit direction vectors shaped (M, 3)."""
    dirs = np.asarray(directions, dtype=float).reshape(-1, 3)
    exponent = config.wavenumber * (dirs @ config.offsets.T) + config.phases
    return np.abs(np.exp(1j * exponent) @ config.weights)


def array_factor(
    config: ArrayConfig, theta: float | np.ndarray, phi: float | np.ndarray
) -> float | np.ndarray:
    """|AF| toward (theta, phi); scalar in, scalar out."""
    dirs = unit_vector(theta, phi)
    magnitude = array_factor_at(config, dirs)
    if np.ndim(dirs) == 1:
        return float(magnitude[0])
    return magnitude.reshape(np.shape(dirs)[:-1])


def steering_phases(config: ArrayConfig, theta0: float, phi0: float) -> np.ndarray:
    """Phases that bring every element in phase toward (theta0, phi0)."""
    target = unit_vector(theta0, phi0)
    return wrap_phase(-config.wavenumber * (config.offsets @ target))


def steer(config: ArrayConfig, theta0: float, phi0: float) -> ArrayConfig:
    return config.with_phases(steering_phases(config, theta0, phi0))


def radiated_power(config: ArrayConfig, grid: DirectionGrid) -> float:
    """Midpoint quadrature of |AF|^2 over the sphere."""
    if not np.any(config.weights > 0):
        raise ZeroPowerArrayError()
    magnitude = array_factor_at(config, grid.directions)
    power = float(np.sum(magnitude**2 * grid.solid_angle))
    if power <= 0:
        raise ZeroPowerArrayError("zero-power array: radiated power integrates to 0")
    return power


def gains_toward(
    config: ArrayConfig, directions: np.ndarray, grid: DirectionGrid, efficiency: float
) -> np.ndarray:
    """Directivity gains toward many unit directions sharing one power integral."""
    total = radiated_power(config, grid)
    magnitude = array_factor_at(config, directions)
    return 4 * math.pi * magnitude**2 * efficiency / total


def directivity_gain(
    config: ArrayConfig, theta0: float, phi0: float, grid: DirectionGrid, efficiency: float
) -> float:
    """Linear directivity gain toward (theta0, phi0) scaled by array efficiency.

    Raises:
        ZeroPowerArrayError: If all excitation weights are zero
    """
    return float(gains_toward(config, unit_vector(theta0, phi0), grid, efficiency)[0])


def angular_distance(directions: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Great-circle angle between unit vectors and one target unit vector."""
    cross = np.linalg.norm(np.cross(directions, target), axis=-1)
    return np.arctan2(cross, directions @ target)


def max_sll(
    config: ArrayConfig, theta0: float, phi0: float, grid: DirectionGrid, mainlobe: float
) -> float:
    """Largest |AF| outside the mainlobe cone divided by |AF| at the target.

    Raises:
        MainlobeExclusionError: If no grid cell lies outside the cone
        BeamformingError: If |AF| at the target is zero
    """
    target = unit_vector(theta0, phi0)
    outside = angular_distance(grid.directions, target) > mainlobe
    if not np.any(outside):
        raise MainlobeExclusionError(
            f"mainlobe half-angle {math.degrees(mainlobe):.2f} deg excludes every grid cell"
        )
    peak = float(array_factor_at(config, target)[0])
    if peak <= 0:
        raise BeamformingError("array factor vanishes at the target direction")
    sidelobe = float(np.max(array_factor_at(config, grid.directions[outside])))
    return sidelobe / peak


def ratio_to_db(ratio: float) -> float:
    """Amplitude ratio in dB, floored for a zero ratio."""
    if ratio <= 0:
        return DB_FLOOR
    return max(DB_FLOOR, 20 * math.log10(ratio))


@dataclass(frozen=True, eq=False)
class BeamPattern:
    grid: DirectionGrid
    magnitudes: np.ndarray
    target: tuple[float, float]
    gain: float
    max_sll: float

    @property
    def normalized_db(self) -> np.ndarray:
        """|AF|^2 relative to the pattern peak in dB."""
        peak = float(np.max(self.magnitudes))
        if peak <= 0:
            return np.full(self.magnitudes.shape, DB_FLOOR)
        with np.errstate(divide="ignore"):
            db = 10 * np.log10((self.magnitudes / peak) ** 2)
        return np.maximum(db, DB_FLOOR)

    @property
    def max_sll_db(self) -> float:
        return ratio_to_db(self.max_sll)


def beam_pattern(
    config: ArrayConfig,
    theta0: float,
    phi0: float,
    grid: DirectionGrid,
    efficiency: float,
    mainlobe: float,
) -> BeamPattern:
    """Full |AF| map plus gain and sidelobe level toward (theta0, phi0)."""
    return BeamPattern(
        grid=grid,
        magnitudes=array_factor_at(config, grid.directions),
        target=(theta0, phi0),
        gain=directivity_gain(config, theta0, phi0, grid, efficiency),
        max_sll=max_sll(config, theta0, phi0, grid, mainlobe),
    )


def write_pattern_csv(pattern: BeamPattern, path: str | Path) -> Path:
    """One row per grid cell: theta, phi, |AF| and normalized dB."""
    rows = zip(
        pattern.grid.cell_theta,
        pattern.grid.cell_phi,
        pattern.magnitudes,
        pattern.normalized_db,
    )
    return write_csv(path, ["theta_rad", "phi_rad", "af_magnitude", "normalized_db"], rows)
