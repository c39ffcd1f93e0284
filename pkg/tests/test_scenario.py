"""Tests for scenario loading, validation and generators."""

import json
import math
from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError

from src.objective import evaluate, min_separation_violation
from src.scenario import (
    REFERENCE_BOXES,
    ArrayParams,
    BaselineLayoutError,
    CommParams,
    ScenarioParseError,
    ScenarioValidationError,
    laa_baseline,
    load_scenario,
    random_scenario,
    save_scenario,
    scenario_from_dict,
    validate_scenario,
)

REFERENCE_SCENARIO = Path(__file__).resolve().parent.parent / "data" / "reference_scenario.json"


def _minimal(**overrides):
    data = {
        "swarms": [
            {"box": {"lower": [0, 0, 70], "upper": [100, 100, 120]}, "positions": [[10, 10, 80]]},
            {
                "box": {"lower": [5000, 0, 70], "upper": [5100, 100, 120]},
                "positions": [[5010, 10, 80]],
            },
        ],
        "eavesdroppers": {"known": [[2500, 50]], "unknown": []},
        "d_min": 0.5,
    }
    data.update(overrides)
    return data


class TestParameterModels:
    """Test parameter defaults and validation."""

    def test_degree_fields_converted(self):
        params = ArrayParams(d_theta_deg=5, d_phi_deg=10, mainlobe_deg=15)
        assert params.d_theta == pytest.approx(math.radians(5))
        assert params.d_phi == pytest.approx(math.radians(10))
        assert params.mainlobe == pytest.approx(math.radians(15))

    def test_theta_step_limit(self):
        with pytest.raises(ValidationError):
            ArrayParams(d_theta_deg=12)

    def test_path_loss_constant_follows_wavelength(self):
        comm = CommParams(wavelength=0.25)
        assert comm.k0 == pytest.approx((0.25 / (4 * math.pi)) ** 2)

    def test_explicit_path_loss_constant_kept(self):
        assert CommParams(k0=1e-4).k0 == 1e-4

    def test_attenuation_order(self):
        with pytest.raises(ValidationError):
            CommParams(mu_los=10.0, mu_nlos=5.0)

    def test_efficiency_bounded(self):
        with pytest.raises(ValidationError):
            CommParams(efficiency=1.2)

    def test_unknown_field_rejected(self):
        with pytest.raises(ValidationError):
            CommParams(bandwith=1e6)


class TestLoadScenario:
    """Test scenario files."""

    def test_reference_scenario(self):
        scenario = load_scenario(REFERENCE_SCENARIO)
        assert scenario.n_uav == 16
        assert len(scenario.known_eavesdroppers) == 2
        assert len(scenario.unknown_eavesdroppers) == 2
        assert scenario.d_min == 0.5
        assert scenario.array.d_theta == pytest.approx(math.radians(5))

    def test_reference_scenario_respects_separation(self):
        scenario = load_scenario(REFERENCE_SCENARIO)
        assert min_separation_violation(scenario.original_positions, scenario.d_min) == 0.0

    def test_missing_file_names_path(self, tmp_path):
        path = tmp_path / "absent.json"
        with pytest.raises(ScenarioParseError, match="absent.json"):
            load_scenario(path)

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ScenarioParseError):
            load_scenario(path)

    def test_two_coordinate_eavesdroppers_on_ground(self):
        scenario = scenario_from_dict(_minimal())
        assert scenario.known_eavesdroppers.tolist() == [[2500.0, 50.0, 0.0]]
        assert scenario.unknown_eavesdroppers.shape == (0, 3)

    def test_save_then_load(self, tmp_path, small_scenario):
        path = save_scenario(small_scenario, tmp_path / "world.json")
        loaded = load_scenario(path)
        assert np.array_equal(loaded.original_positions, small_scenario.original_positions)
        assert np.array_equal(loaded.known_eavesdroppers, small_scenario.known_eavesdroppers)
        assert loaded.comm == small_scenario.comm
        assert loaded.array == small_scenario.array

    def test_arrays_read_only(self, small_scenario):
        with pytest.raises(ValueError):
            small_scenario.original_positions[0, 0, 0] = 1.0


class TestValidation:
    """Test each scenario invariant."""

    def test_overlapping_areas(self):
        data = _minimal()
        data["swarms"][1]["box"] = {"lower": [50, 50, 70], "upper": [150, 150, 120]}
        data["swarms"][1]["positions"] = [[60, 60, 80]]
        with pytest.raises(ScenarioValidationError, match="overlap"):
            scenario_from_dict(data)

    def test_uav_outside_area(self):
        data = _minimal()
        data["swarms"][0]["positions"] = [[10, 10, 200]]
        with pytest.raises(ScenarioValidationError, match="outside"):
            scenario_from_dict(data)

    def test_airborne_eavesdropper(self):
        with pytest.raises(ScenarioValidationError, match="ground"):
            scenario_from_dict(_minimal(eavesdroppers={"known": [[2500, 50, 30]]}))

    def test_nonpositive_separation(self):
        with pytest.raises(ScenarioValidationError, match="d_min"):
            scenario_from_dict(_minimal(d_min=0))

    def test_unequal_swarms(self):
        data = _minimal()
        data["swarms"][0]["positions"] = [[10, 10, 80], [20, 10, 80]]
        with pytest.raises(ScenarioValidationError, match="same number"):
            scenario_from_dict(data)

    def test_schema_errors_wrapped(self):
        """Test pydantic errors surface as ScenarioValidationError naming the field."""
        with pytest.raises(ScenarioValidationError, match="array"):
            scenario_from_dict(_minimal(array={"d_theta_deg": 20}))

    def test_single_swarm(self):
        data = _minimal()
        data["swarms"] = data["swarms"][:1]
        with pytest.raises(ScenarioValidationError):
            scenario_from_dict(data)


class TestRandomScenario:
    """Test the seeded world generator."""

    def test_reproducible(self):
        a = random_scenario(11, 5, 3, 2)
        b = random_scenario(11, 5, 3, 2)
        assert np.array_equal(a.original_positions, b.original_positions)
        assert np.array_equal(a.all_eavesdroppers, b.all_eavesdroppers)

    def test_layout(self):
        scenario = random_scenario(2, 8, 4, 3, ground_margin=500.0)
        for box, swarm in zip(scenario.boxes, scenario.original_positions):
            assert box.contains(swarm)
        eaves = scenario.all_eavesdroppers
        assert eaves.shape == (7, 3)
        assert np.all(eaves[:, 2] == 0)
        assert np.all(eaves[:, 0] >= -500.0) and np.all(eaves[:, 0] <= 5600.0)
        assert np.all(eaves[:, 1] >= -500.0) and np.all(eaves[:, 1] <= 600.0)

    def test_hundred_seeds_pass_validation(self):
        for seed in range(100):
            scenario = random_scenario(seed, 16, 2, 2)
            assert validate_scenario(scenario) is scenario
            assert scenario.original_positions.shape == (2, 16, 3)

    def test_default_boxes(self):
        scenario = random_scenario(0, 2, 0, 0)
        assert scenario.boxes == REFERENCE_BOXES

    def test_invalid_counts(self):
        with pytest.raises(ValueError):
            random_scenario(0, 0, 1, 1)


class TestLinearBaseline:
    """Test the linear-array baseline."""

    def test_half_wavelength_line(self, small_scenario):
        solution = laa_baseline(small_scenario, seed=4)
        spacing = small_scenario.comm.wavelength / 2
        for box, swarm in zip(small_scenario.boxes, solution.positions):
            assert np.diff(swarm[:, 0]) == pytest.approx(np.full(3, spacing))
            assert swarm[:, 1] == pytest.approx(np.full(4, box.center[1]))
            assert swarm[:, 2] == pytest.approx(np.full(4, box.center[2]))
            assert box.contains(swarm)
        assert np.all(solution.weights == 1.0)
        assert np.all((solution.receivers >= 0) & (solution.receivers < 4))

    def test_seeded_receivers(self, small_scenario):
        a = laa_baseline(small_scenario, seed=9)
        b = laa_baseline(small_scenario, seed=9)
        assert np.array_equal(a.receivers, b.receivers)

    def test_feasible_when_spacing_allows(self):
        scenario = random_scenario(
            1, 4, 1, 0, d_min=0.05, array=ArrayParams(d_theta_deg=10, d_phi_deg=10)
        )
        assert evaluate(scenario, laa_baseline(scenario, 0)).feasible

    def test_line_wider_than_area(self):
        scenario = random_scenario(1, 16, 0, 0, comm=CommParams(wavelength=20.0))
        with pytest.raises(BaselineLayoutError) as exc:
            laa_baseline(scenario, 0)
        assert exc.value.swarm == 1
        assert exc.value.span == pytest.approx(150.0)

    def test_reference_file_is_json_object(self):
        assert isinstance(json.loads(REFERENCE_SCENARIO.read_text()), dict)
