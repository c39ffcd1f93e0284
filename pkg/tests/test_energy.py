"""Tests for propulsion power and reconfiguration energy."""

import numpy as np
import pytest

from src.energy import (
    FlightLeg,
    SolutionShapeError,
    flight_energy,
    propulsion_power,
    reconfiguration_energy,
)
from src.scenario import EnergyParams


class TestPropulsionPower:
    """Test the rotary-wing power model."""

    def test_hover_power(self):
        """Test hovering costs blade plus induced power."""
        assert propulsion_power(0.0, EnergyParams()) == pytest.approx(79.86 + 88.63)

    def test_array_input(self):
        powers = propulsion_power(np.array([0.0, 5.0, 10.0]), EnergyParams())
        assert powers.shape == (3,)
        assert powers[0] == pytest.approx(168.49)

    def test_minimum_power_speed_below_cruise(self):
        """Test power dips below hover at moderate speed before parasite drag dominates."""
        params = EnergyParams()
        assert propulsion_power(10.0, params) < propulsion_power(0.0, params)
        assert propulsion_power(40.0, params) > propulsion_power(10.0, params)


class TestFlightEnergy:
    """Test the energy of single legs."""

    def test_pure_climb(self):
        leg = FlightLeg((0.0, 0.0, 100.0), (0.0, 0.0, 110.0))
        assert flight_energy(leg, EnergyParams()) == pytest.approx(533.0, abs=0.1)

    def test_horizontal_leg(self):
        params = EnergyParams()
        leg = FlightLeg((0.0, 0.0, 100.0), (60.0, 80.0, 100.0))
        expected = propulsion_power(10.0, params) * 100.0 / 10.0
        assert flight_energy(leg, params) == pytest.approx(expected)

    def test_descent_recovers_potential(self):
        params = EnergyParams()
        climb = flight_energy(FlightLeg((0, 0, 100), (0, 0, 110)), params)
        descent = flight_energy(FlightLeg((0, 0, 110), (0, 0, 100)), params)
        assert descent == pytest.approx(climb - 2 * 2.0 * 9.8 * 10.0)

    def test_descent_never_negative(self):
        """Test a heavy UAV dropping fast does not produce negative energy."""
        params = EnergyParams(blade_power=1.0, induced_power=1.0, mass=100.0)
        leg = FlightLeg((0.0, 0.0, 110.0), (0.0, 0.0, 100.0))
        assert flight_energy(leg, params) == 0.0

    def test_leg_properties(self):
        leg = FlightLeg((0.0, 0.0, 100.0), (3.0, 4.0, 90.0))
        assert leg.horizontal_distance == pytest.approx(5.0)
        assert leg.vertical_displacement == pytest.approx(-10.0)


class TestReconfigurationEnergy:
    """Test swarm-wide reconfiguration energy."""

    def test_no_move_costs_nothing(self, small_scenario):
        original = small_scenario.original_positions
        assert reconfiguration_energy(original, original.copy(), small_scenario.energy) == 0.0

    def test_sum_of_legs(self):
        params = EnergyParams()
        original = np.array([[[0.0, 0.0, 100.0], [10.0, 0.0, 100.0]]])
        target = np.array([[[0.0, 0.0, 110.0], [10.0, 50.0, 100.0]]])
        expected = flight_energy(
            FlightLeg((0, 0, 100), (0, 0, 110)), params
        ) + flight_energy(FlightLeg((10, 0, 100), (10, 50, 100)), params)
        assert reconfiguration_energy(original, target, params) == pytest.approx(expected)

    def test_shape_mismatch(self):
        with pytest.raises(SolutionShapeError):
            reconfiguration_energy(np.zeros((2, 3, 3)), np.zeros((2, 4, 3)), EnergyParams())
