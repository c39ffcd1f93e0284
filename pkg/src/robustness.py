"""Monte Carlo degradation of a fixed solution under phase, CSI and position errors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np
from loguru import logger

from src.beamforming import DirectionGrid, direction_grid, wrap_phase
from src.channel import SteeredArray, secrecy_from_arrays, steered_arrays
from src.objective import Solution, min_separation_violation, sidelobe_level_db
from src.scenario import Scenario
from src.utils import derive_rng

SPEED_OF_LIGHT = 299_792_458.0

PerturbKind = Literal["phase", "csi", "jitter"]


@dataclass(frozen=True)
class PerturbSpec:
    """What to perturb, how strongly, and how many seeded trials to run."""

    kind: PerturbKind
    trials: int = 100
    seed: int = 0
    omega_c: float | None = None  # rad/s; derived from the wavelength when None
    q1: float = 1e-10
    q2: float = 1e-12
    delta_t: float = 1e-3
    codebook_size: int = 16
    drift: float = 0.0

    def __post_init__(self):
        if self.kind not in ("phase", "csi", "jitter"):
            raise ValueError(f"Unknown perturbation kind '{self.kind}'. Use phase, csi or jitter")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.kind == "csi":
            m = self.codebook_size
            if m < 2 or m & (m - 1):
                raise ValueError(f"codebook size must be a power of two, got {m}")
        if self.drift < 0:
            raise ValueError("drift must be non-negative")
        if self.q1 < 0 or self.q2 < 0 or self.delta_t <= 0:
            raise ValueError("oscillator parameters must be non-negative with delta_t > 0")

    def phase_std(self, wavelength: float) -> float:
        """Standard deviation (rad) of the residual synchronisation phase error."""
        omega = self.omega_c or 2 * math.pi * SPEED_OF_LIGHT / wavelength
        variance = omega**2 * (self.q1**2 * self.delta_t + self.q2**2 * self.delta_t**3 / 3)
        return math.sqrt(variance)


def quantize_phases(phases: np.ndarray, codebook_size: int) -> np.ndarray:
    """Nearest of the codebook phases 2*pi*m/M."""
    step = 2 * math.pi / codebook_size
    index = np.mod(np.round(np.asarray(phases) / step), codebook_size)
    return index * step


def unit_ball(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    """Points uniform in the unit ball, shaped ``shape + (3,)``."""
    direction = rng.normal(size=(*shape, 3))
    norm = np.linalg.norm(direction, axis=-1, keepdims=True)
    norm[norm == 0] = 1.0
    radius = rng.random((*shape, 1)) ** (1 / 3)
    return direction / norm * radius


@dataclass(frozen=True, eq=False)
class PerturbedInputs:
    arrays: tuple[SteeredArray, SteeredArray]
    positions: np.ndarray


def perturb(
    scenario: Scenario, solution: Solution, spec: PerturbSpec, trial: int
) -> PerturbedInputs:
    """Arrays of one trial, deterministic in (spec.seed, trial).

    Jitter displaces every UAV, receivers included, while phases stay the ones
    planned for the nominal positions. Its unit-ball draws depend only on
    (seed, trial), so different drift levels share the same samples.
    """
    rng = derive_rng(spec.seed, trial)
    if spec.kind == "jitter":
        offsets = spec.drift * unit_ball(rng, solution.positions.shape[:2])
        positions = solution.positions + offsets
        arrays = steered_arrays(
            scenario, positions, solution.weights, solution.receivers, solution.positions
        )
        return PerturbedInputs(arrays, positions)

    nominal = steered_arrays(scenario, solution.positions, solution.weights, solution.receivers)
    if spec.kind == "phase":
        std = spec.phase_std(scenario.comm.wavelength)
        perturbed = tuple(
            array.with_phases(
                wrap_phase(array.config.phases + rng.normal(0.0, std, array.config.phases.shape))
            )
            for array in nominal
        )
    else:
        perturbed = tuple(
            array.with_phases(quantize_phases(array.config.phases, spec.codebook_size))
            for array in nominal
        )
    return PerturbedInputs((perturbed[0], perturbed[1]), solution.positions)


@dataclass(frozen=True)
class RobustnessStats:
    """Per-trial f1 (C_KE, bps) and f2 (max SLL, dB) samples with summaries."""

    f1: np.ndarray = field(repr=False)
    f2: np.ndarray = field(repr=False)

    @property
    def trials(self) -> int:
        return len(self.f1)

    @staticmethod
    def _describe(samples: np.ndarray) -> dict[str, float]:
        return {
            "mean": float(np.mean(samples)),
            "std": float(np.std(samples)),
            "p5": float(np.percentile(samples, 5)),
            "p95": float(np.percentile(samples, 95)),
        }

    @property
    def f1_summary(self) -> dict[str, float]:
        return self._describe(self.f1)

    @property
    def f2_summary(self) -> dict[str, float]:
        return self._describe(self.f2)

    def rows(self) -> list[list[Any]]:
        return [[i, float(a), float(b)] for i, (a, b) in enumerate(zip(self.f1, self.f2))]

    def to_dict(self) -> dict[str, Any]:
        return {"trials": self.trials, "f1_bps": self.f1_summary, "f2_db": self.f2_summary}


def monte_carlo(
    scenario: Scenario,
    solution: Solution,
    spec: PerturbSpec,
    grid: DirectionGrid | None = None,
) -> RobustnessStats:
    """Evaluate f1 and f2 of ``solution`` over ``spec.trials`` perturbed trials."""
    solution.check_against(scenario)
    grid = grid or direction_grid(scenario.array.d_theta, scenario.array.d_phi)
    if min_separation_violation(solution.positions, scenario.d_min) > 0:
        logger.warning("Robustness study on an infeasible solution (separation below d_min)")

    f1, f2 = np.empty(spec.trials), np.empty(spec.trials)
    for trial in range(spec.trials):
        inputs = perturb(scenario, solution, spec, trial)
        f1[trial] = secrecy_from_arrays(scenario, inputs.arrays, "known", grid).capacity
        f2[trial] = sidelobe_level_db(scenario, inputs.arrays, grid)

    stats = RobustnessStats(f1, f2)
    logger.info(
        f"Robustness ({spec.kind}, {spec.trials} trials): "
        f"f1 mean {stats.f1_summary['mean']:.4g} bps, f2 mean {stats.f2_summary['mean']:.2f} dB"
    )
    return stats
