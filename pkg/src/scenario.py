"""World description: swarm areas, UAV positions, eavesdroppers and physical parameters."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Any, Literal

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

if TYPE_CHECKING:
    from src.objective import Solution

DEFAULT_WAVELENGTH = 0.125  # 2.4 GHz
DEFAULT_GROUND_MARGIN = 1000.0


class ScenarioError(Exception):
    """Base exception for scenario errors."""

    pass


class ScenarioParseError(ScenarioError):
    """Raised when a scenario file cannot be read or decoded."""

    pass


class ScenarioValidationError(ScenarioError):
    """Raised when a scenario violates one of its invariants."""

    pass


class BaselineLayoutError(ScenarioError):
    """Raised when the linear baseline array does not fit inside a swarm area."""

    def __init__(self, swarm: int, span: float, width: float):
        self.swarm = swarm
        self.span = span
        self.width = width
        super().__init__(
            f"Linear array of swarm {swarm} spans {span:.4f} m but the area is only "
            f"{width:.4f} m wide"
        )


def _degrees_to_radians(data: Any) -> Any:
    """Replace every `<name>_deg` key by `<name>` in radians."""
    if not isinstance(data, dict):
        return data
    converted = {}
    for key, value in data.items():
        if key.endswith("_deg") and value is not None:
            converted[key[: -len("_deg")]] = math.radians(float(value))
        else:
            converted[key] = value
    return converted


class _ParamsModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    @model_validator(mode="before")
    @classmethod
    def convert_degree_fields(cls, data: Any) -> Any:
        return _degrees_to_radians(data)


class CommParams(_ParamsModel):
    """Channel and radio parameters shared by both virtual arrays."""

    bandwidth: float = Field(default=1e6, gt=0, description="Bandwidth B (Hz)")
    transmit_power: float = Field(default=0.1, gt=0, description="Total power per array (W)")
    k0: float = Field(default=(DEFAULT_WAVELENGTH / (4 * math.pi)) ** 2, gt=0)
    path_loss_exponent: float = Field(default=2.0, gt=0)
    noise_power: float = Field(default=1e-13, gt=0, description="Noise power (W)")
    b1: float = Field(default=9.61, gt=0, description="LoS model constant (degree input)")
    b2: float = Field(default=0.16, gt=0, description="LoS model constant (degree input)")
    mu_los: float = Field(default=2.0, gt=0, description="LoS attenuation (linear)")
    mu_nlos: float = Field(default=200.0, gt=0, description="NLoS attenuation (linear)")
    wavelength: float = Field(
        default=DEFAULT_WAVELENGTH, gt=0, description="Carrier wavelength (m)"
    )
    efficiency: float = Field(default=0.8, gt=0, le=1, description="Array efficiency")

    @model_validator(mode="before")
    @classmethod
    def default_path_loss_constant(cls, data: Any) -> Any:
        """K0 follows the wavelength as (lambda / 4pi)^2 unless given."""
        if isinstance(data, dict) and data.get("k0") is None:
            data = dict(data)
            data.pop("k0", None)
            wavelength = float(data.get("wavelength", DEFAULT_WAVELENGTH))
            data["k0"] = (wavelength / (4 * math.pi)) ** 2
        return data

    @model_validator(mode="after")
    def check_attenuation_order(self) -> CommParams:
        if self.mu_nlos < self.mu_los:
            raise ValueError("mu_nlos must be >= mu_los")
        return self


class EnergyParams(_ParamsModel):
    """Rotary-wing propulsion constants and cruise speeds."""

    blade_power: float = Field(default=79.86, gt=0, description="Blade profile power P_B (W)")
    induced_power: float = Field(default=88.63, gt=0, description="Induced power P_I (W)")
    tip_speed: float = Field(default=120.0, gt=0, description="Rotor tip speed (m/s)")
    hover_velocity: float = Field(default=4.03, gt=0, description="Mean induced velocity v0")
    drag_ratio: float = Field(default=0.6, gt=0, description="Fuselage drag ratio d0")
    solidity: float = Field(default=0.05, gt=0, description="Rotor solidity s")
    air_density: float = Field(default=1.225, gt=0, description="Air density (kg/m^3)")
    disc_area: float = Field(default=0.503, gt=0, description="Rotor disc area (m^2)")
    mass: float = Field(default=2.0, gt=0, description="UAV mass (kg)")
    gravity: float = Field(default=9.8, gt=0)
    horizontal_speed: float = Field(default=10.0, gt=0, description="Cruise speed (m/s)")
    vertical_speed: float = Field(default=5.0, gt=0, description="Climb/descent speed (m/s)")


class ArrayParams(_ParamsModel):
    """Direction grid and sidelobe scan settings."""

    d_theta: float = Field(default=math.radians(5.0), gt=0)
    d_phi: float = Field(default=math.radians(5.0), gt=0, le=math.pi)
    mainlobe: float = Field(default=math.radians(10.0), gt=0, lt=math.pi / 2)
    element_pattern: Literal["isotropic"] = "isotropic"

    @field_validator("d_theta")
    @classmethod
    def check_theta_step(cls, value: float) -> float:
        if value > math.pi / 18 + 1e-12:
            raise ValueError("d_theta must not exceed 10 degrees")
        return value


@dataclass(frozen=True)
class Box:
    """Axis-aligned area of a swarm: horizontal extent and allowed height band."""

    lower: tuple[float, float, float]
    upper: tuple[float, float, float]

    def __post_init__(self):
        lower = tuple(float(v) for v in self.lower)
        upper = tuple(float(v) for v in self.upper)
        if len(lower) != 3 or len(upper) != 3:
            raise ScenarioValidationError("box corners must have three coordinates")
        if any(lo > hi for lo, hi in zip(lower, upper)):
            raise ScenarioValidationError(f"box lower corner {lower} exceeds upper {upper}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def center(self) -> np.ndarray:
        return (np.asarray(self.lower) + np.asarray(self.upper)) / 2

    @property
    def size(self) -> np.ndarray:
        return np.asarray(self.upper) - np.asarray(self.lower)

    def contains(self, points: np.ndarray, tol: float = 1e-9) -> bool:
        pts = np.asarray(points, dtype=float).reshape(-1, 3)
        return bool(
            np.all(pts >= np.asarray(self.lower) - tol)
            and np.all(pts <= np.asarray(self.upper) + tol)
        )

    def clamp(self, points: np.ndarray) -> np.ndarray:
        return np.clip(points, self.lower, self.upper)

    def overlaps(self, other: Box) -> bool:
        return all(
            a_lo < b_hi and b_lo < a_hi
            for a_lo, a_hi, b_lo, b_hi in zip(self.lower, self.upper, other.lower, other.upper)
        )


def _readonly(values: Any, shape_tail: tuple[int, ...]) -> np.ndarray:
    array = np.array(values, dtype=float)
    if array.size == 0:
        array = array.reshape((0, *shape_tail))
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Scenario:
    """Immutable world: two swarms, their areas, eavesdroppers and parameters."""

    boxes: tuple[Box, Box]
    original_positions: np.ndarray  # (2, N_U, 3)
    known_eavesdroppers: np.ndarray  # (K, 3), z = 0
    unknown_eavesdroppers: np.ndarray  # (M, 3), z = 0
    comm: CommParams
    energy: EnergyParams
    array: ArrayParams
    d_min: float

    def __post_init__(self):
        object.__setattr__(self, "boxes", tuple(self.boxes))
        object.__setattr__(self, "original_positions", _readonly(self.original_positions, (3,)))
        object.__setattr__(self, "known_eavesdroppers", _readonly(self.known_eavesdroppers, (3,)))
        object.__setattr__(
            self, "unknown_eavesdroppers", _readonly(self.unknown_eavesdroppers, (3,))
        )
        object.__setattr__(self, "d_min", float(self.d_min))

    @property
    def n_uav(self) -> int:
        return int(self.original_positions.shape[1])

    @property
    def all_eavesdroppers(self) -> np.ndarray:
        return np.vstack([self.known_eavesdroppers, self.unknown_eavesdroppers])

    def position_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-UAV lower and upper corners, shaped like original_positions."""
        lower = np.stack([np.tile(box.lower, (self.n_uav, 1)) for box in self.boxes])
        upper = np.stack([np.tile(box.upper, (self.n_uav, 1)) for box in self.boxes])
        return lower, upper


def validate_scenario(scenario: Scenario) -> Scenario:
    """Check every scenario invariant, raising on the first violation.

    Raises:
        ScenarioValidationError: Naming the violated invariant
    """
    positions = scenario.original_positions
    if len(scenario.boxes) != 2:
        raise ScenarioValidationError(f"expected 2 swarm areas, got {len(scenario.boxes)}")
    if positions.ndim != 3 or positions.shape[0] != 2 or positions.shape[2] != 3:
        raise ScenarioValidationError(
            f"original positions must be shaped (2, N_U, 3), got {positions.shape}"
        )
    if positions.shape[1] < 1:
        raise ScenarioValidationError("each swarm needs at least one UAV")
    if not scenario.d_min > 0:
        raise ScenarioValidationError(f"d_min must be positive, got {scenario.d_min}")
    if scenario.boxes[0].overlaps(scenario.boxes[1]):
        raise ScenarioValidationError("swarm areas overlap")
    for i, box in enumerate(scenario.boxes):
        for j, point in enumerate(positions[i]):
            if not box.contains(point):
                raise ScenarioValidationError(
                    f"UAV {j} of swarm {i + 1} at {point.tolist()} lies outside its area "
                    f"{box.lower}..{box.upper}"
                )
    for name, eaves in (
        ("known", scenario.known_eavesdroppers),
        ("unknown", scenario.unknown_eavesdroppers),
    ):
        if eaves.ndim != 2 or eaves.shape[1] != 3:
            raise ScenarioValidationError(f"{name} eavesdroppers must be ground points")
        if np.any(eaves[:, 2] != 0):
            raise ScenarioValidationError(f"{name} eavesdroppers must be on the ground (z = 0)")
    return scenario


# --- File format ---


class _BoxModel(BaseModel):
    lower: list[float] = Field(min_length=3, max_length=3)
    upper: list[float] = Field(min_length=3, max_length=3)


class _SwarmModel(BaseModel):
    box: _BoxModel
    positions: list[list[float]] = Field(min_length=1)


class _EavesdroppersModel(BaseModel):
    known: list[list[float]] = Field(default_factory=list)
    unknown: list[list[float]] = Field(default_factory=list)


class ScenarioFile(BaseModel):
    """Schema of the JSON scenario file."""

    model_config = ConfigDict(extra="forbid")

    swarms: list[_SwarmModel] = Field(min_length=2, max_length=2)
    eavesdroppers: _EavesdroppersModel = Field(default_factory=_EavesdroppersModel)
    comm: CommParams = Field(default_factory=CommParams)
    energy: EnergyParams = Field(default_factory=EnergyParams)
    array: ArrayParams = Field(default_factory=ArrayParams)
    d_min: float


def _ground_points(points: list[list[float]], name: str) -> np.ndarray:
    rows = []
    for point in points:
        if len(point) == 2:
            rows.append([point[0], point[1], 0.0])
        elif len(point) == 3:
            rows.append(list(point))
        else:
            raise ScenarioValidationError(f"{name} eavesdropper {point} needs 2 coordinates")
    return np.array(rows, dtype=float).reshape(-1, 3)


def scenario_from_dict(data: dict[str, Any]) -> Scenario:
    """Build and validate a Scenario from decoded JSON."""
    try:
        spec = ScenarioFile.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise ScenarioValidationError(f"{location}: {first['msg']}") from e

    counts = {len(swarm.positions) for swarm in spec.swarms}
    if len(counts) != 1:
        raise ScenarioValidationError("both swarms must have the same number of UAVs")
    for i, swarm in enumerate(spec.swarms):
        if any(len(p) != 3 for p in swarm.positions):
            raise ScenarioValidationError(f"positions of swarm {i + 1} need 3 coordinates")

    scenario = Scenario(
        boxes=tuple(Box(tuple(s.box.lower), tuple(s.box.upper)) for s in spec.swarms),
        original_positions=np.array([s.positions for s in spec.swarms], dtype=float),
        known_eavesdroppers=_ground_points(spec.eavesdroppers.known, "known"),
        unknown_eavesdroppers=_ground_points(spec.eavesdroppers.unknown, "unknown"),
        comm=spec.comm,
        energy=spec.energy,
        array=spec.array,
        d_min=spec.d_min,
    )
    return validate_scenario(scenario)


def scenario_to_dict(scenario: Scenario) -> dict[str, Any]:
    """Encode a Scenario in the documented file format (radians, metres, watts)."""
    return {
        "swarms": [
            {
                "box": {"lower": list(box.lower), "upper": list(box.upper)},
                "positions": scenario.original_positions[i].tolist(),
            }
            for i, box in enumerate(scenario.boxes)
        ],
        "eavesdroppers": {
            "known": scenario.known_eavesdroppers[:, :2].tolist(),
            "unknown": scenario.unknown_eavesdroppers[:, :2].tolist(),
        },
        "comm": scenario.comm.model_dump(),
        "energy": scenario.energy.model_dump(),
        "array": scenario.array.model_dump(),
        "d_min": scenario.d_min,
    }


def load_scenario(path: str | Path) -> Scenario:
    """Load a scenario file.

    Args:
        path: Path to the JSON scenario file

    Returns:
        Validated Scenario

    Raises:
        ScenarioParseError: If the file is missing or is not valid JSON
        ScenarioValidationError: If the content violates an invariant
    """
    file_path = Path(path)
    if not file_path.is_file():
        raise ScenarioParseError(f"Scenario file not found: {file_path}")
    try:
        data = json.loads(file_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ScenarioParseError(f"Malformed scenario file {file_path}: {e}") from e
    if not isinstance(data, dict):
        raise ScenarioParseError(f"Scenario file {file_path} must contain a JSON object")

    scenario = scenario_from_dict(data)
    logger.debug(
        f"Loaded scenario {file_path}: {scenario.n_uav} UAVs/swarm, "
        f"{len(scenario.known_eavesdroppers)} known and "
        f"{len(scenario.unknown_eavesdroppers)} unknown eavesdroppers"
    )
    return scenario


def save_scenario(scenario: Scenario, path: str | Path) -> Path:
    """Write a scenario in the documented JSON format."""
    file_path = Path(path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    file_path.write_text(json.dumps(scenario_to_dict(scenario), indent=2), encoding="utf-8")
    return file_path


# --- Generators ---

REFERENCE_BOXES = (
    Box((0.0, 0.0, 70.0), (100.0, 100.0, 120.0)),
    Box((5000.0, 0.0, 70.0), (5100.0, 100.0, 120.0)),
)


def random_scenario(
    seed: int,
    n_uav: int,
    n_known: int,
    n_unknown: int,
    *,
    boxes: tuple[Box, Box] = REFERENCE_BOXES,
    ground_margin: float = DEFAULT_GROUND_MARGIN,
    d_min: float = 0.5,
    comm: CommParams | None = None,
    energy: EnergyParams | None = None,
    array: ArrayParams | None = None,
) -> Scenario:
    """Generate a reproducible random world.

    UAVs are uniform inside their areas; eavesdroppers are uniform on the ground
    rectangle covering both areas widened by ``ground_margin`` on every side.
    """
    if n_uav < 1:
        raise ValueError(f"n_uav must be at least 1, got {n_uav}")
    if n_known < 0 or n_unknown < 0:
        raise ValueError("eavesdropper counts must be non-negative")

    rng = np.random.default_rng(seed)
    positions = np.stack(
        [rng.uniform(box.lower, box.upper, size=(n_uav, 3)) for box in boxes]
    )

    ground_lower = np.minimum(boxes[0].lower, boxes[1].lower)[:2] - ground_margin
    ground_upper = np.maximum(boxes[0].upper, boxes[1].upper)[:2] + ground_margin

    def ground(count: int) -> np.ndarray:
        xy = rng.uniform(ground_lower, ground_upper, size=(count, 2))
        return np.hstack([xy, np.zeros((count, 1))])

    scenario = Scenario(
        boxes=boxes,
        original_positions=positions,
        known_eavesdroppers=ground(n_known),
        unknown_eavesdroppers=ground(n_unknown),
        comm=comm or CommParams(),
        energy=energy or EnergyParams(),
        array=array or ArrayParams(),
        d_min=d_min,
    )
    return validate_scenario(scenario)


def laa_baseline(scenario: Scenario, seed: int) -> Solution:
    """Linear-array baseline: each swarm lines up along x at half-wavelength spacing.

    The line passes through the area centre at mid-height, all weights are 1 and
    each receiver is drawn uniformly from the other swarm.

    Raises:
        BaselineLayoutError: If the line does not fit inside an area
    """
    from src.objective import Solution

    rng = np.random.default_rng(seed)
    n = scenario.n_uav
    spacing = scenario.comm.wavelength / 2
    span = (n - 1) * spacing
    offsets = (np.arange(n) - (n - 1) / 2) * spacing

    swarms = []
    for i, box in enumerate(scenario.boxes):
        width = float(box.size[0])
        if span > width:
            raise BaselineLayoutError(i + 1, span, width)
        center = box.center
        line = np.tile(center, (n, 1))
        line[:, 0] = center[0] + offsets
        swarms.append(line)

    return Solution(
        positions=np.stack(swarms),
        weights=np.ones((2, n)),
        receivers=rng.integers(0, n, size=2),
    )
