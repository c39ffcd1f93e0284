"""Pytest configuration and fixtures."""

import json

import numpy as np
import pytest

from config.config import Settings
from src.beamforming import ArrayConfig
from src.objective import Solution
from src.optimizers import AlgoParams
from src.scenario import ArrayParams, random_scenario, save_scenario, scenario_from_dict


@pytest.fixture
def test_config():
    """Create test configuration."""
    return Settings(
        log_level="WARNING",
        population_size=6,
        max_iterations=4,
        threads=1,
        grid_step_deg=10.0,
    )


@pytest.fixture
def small_scenario():
    """Four UAVs per swarm in the reference areas, coarse 10 degree grid."""
    return random_scenario(
        3,
        4,
        2,
        1,
        d_min=0.5,
        array=ArrayParams(d_theta_deg=10.0, d_phi_deg=10.0),
    )


@pytest.fixture
def scenario_file(tmp_path, small_scenario):
    """Small scenario saved to disk."""
    return save_scenario(small_scenario, tmp_path / "scenario.json")


@pytest.fixture
def small_params():
    """Optimizer parameters sized for fast tests."""
    return AlgoParams(population_size=6, max_iterations=4, seed=1)


@pytest.fixture
def original_solution(small_scenario):
    """Solution that keeps every UAV at its original position."""
    n = small_scenario.n_uav
    return Solution(
        positions=small_scenario.original_positions.copy(),
        weights=np.ones((2, n)),
        receivers=[0, 1],
    )


@pytest.fixture
def solution_file(tmp_path, original_solution):
    path = tmp_path / "solution.json"
    path.write_text(json.dumps(original_solution.to_dict()), encoding="utf-8")
    return path


@pytest.fixture
def half_wave_pair():
    """Two isotropic elements half a wavelength apart along x, in phase."""
    wavelength = 0.125
    positions = np.array([[-wavelength / 4, 0.0, 0.0], [wavelength / 4, 0.0, 0.0]])
    return ArrayConfig.unsteered(positions, np.ones(2), wavelength)


@pytest.fixture
def linear_scenario():
    """Two four-element lines at half-wavelength spacing (wavelength 20 m), no eavesdroppers.

    Swarm 1 aims at UAV 0 of swarm 2 and swarm 2 at UAV 3 of swarm 1; both
    directions make cos 0.9 with the array axis.
    """
    swarm1 = [[x, 100.0, 100.0] for x in (85.0, 95.0, 105.0, 115.0)]
    swarm2 = [[x, 535.89, 100.0] for x in (1000.0, 1010.0, 1020.0, 1030.0)]
    return scenario_from_dict(
        {
            "swarms": [
                {"box": {"lower": [0, 0, 50], "upper": [200, 200, 150]}, "positions": swarm1},
                {"box": {"lower": [900, 400, 50], "upper": [1100, 700, 150]}, "positions": swarm2},
            ],
            "comm": {"wavelength": 20.0},
            "array": {"d_theta_deg": 5.0, "d_phi_deg": 5.0},
            "d_min": 0.5,
        }
    )


@pytest.fixture
def linear_solution(linear_scenario):
    return Solution(
        positions=linear_scenario.original_positions.copy(),
        weights=np.ones((2, 4)),
        receivers=[0, 3],
    )
