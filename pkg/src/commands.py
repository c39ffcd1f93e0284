"""Command handlers for the command-line interface.

Every handler takes the parsed arguments and the settings, writes its artifacts
and returns a process exit code. Exceptions are mapped to exit codes by the app.
"""

import argparse
import json
from dataclasses import asdict, replace
from pathlib import Path

from loguru import logger

from config.config import Settings
from src.beamforming import beam_pattern, direction_grid, write_pattern_csv
from src.channel import link_geometry, secrecy_report, steered_arrays
from src.energy import SolutionShapeError
from src.objective import Solution, evaluate
from src.optimizers import (
    AlgoParams,
    Archive,
    ArchiveEntry,
    OptimizerFactory,
    RunResult,
    select_final,
)
from src.robustness import PerturbSpec, monte_carlo
from src.scenario import (
    ArrayParams,
    Scenario,
    ScenarioParseError,
    laa_baseline,
    load_scenario,
    random_scenario,
    save_scenario,
)
from src.services import EvaluationService, RunManifest, RunService
from src.utils import format_db, format_energy, format_rate, format_summary, sha256_file


def load_solution(path: str | Path) -> Solution:
    """Read a solution file; archive entries ({"solution": ...}) are accepted too.

    Raises:
        ScenarioParseError: If the file is missing or not JSON
        SolutionShapeError: If the content is not a solution
    """
    file_path = Path(path)
    if not file_path.is_file():
        raise ScenarioParseError(f"Solution file not found: {file_path}")
    try:
        data = json.loads(file_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ScenarioParseError(f"Malformed solution file {file_path}: {e}") from e
    if isinstance(data, dict) and "solution" in data:
        data = data["solution"]
    if not isinstance(data, dict):
        raise SolutionShapeError(f"Solution file {file_path} must contain a JSON object")
    return Solution.from_dict(data)


def _load_scenario(args: argparse.Namespace) -> Scenario:
    scenario = load_scenario(args.scenario)
    grid_deg = getattr(args, "grid_deg", None)
    if grid_deg is not None:
        array = ArrayParams(
            d_theta_deg=grid_deg,
            d_phi_deg=grid_deg,
            mainlobe=scenario.array.mainlobe,
            element_pattern=scenario.array.element_pattern,
        )
        scenario = replace(scenario, array=array)
    return scenario


def _manifest(
    command: str,
    args: argparse.Namespace,
    scenario: Scenario,
    params: dict,
    algorithm: str | None = None,
) -> RunManifest:
    """Manifest of one command; the grid actually used is recorded after any override."""
    scenario_path = getattr(args, "scenario", None)
    params = {
        **params,
        "grid_deg": getattr(args, "grid_deg", None),
        "array": scenario.array.model_dump(),
    }
    return RunManifest(
        command=command,
        scenario_path=str(scenario_path) if scenario_path else None,
        scenario_sha256=sha256_file(scenario_path) if scenario_path else None,
        algorithm=algorithm,
        seed=getattr(args, "seed", None),
        params=params,
        output_dir=str(args.out),
    )


def _print_summary(entry: ArchiveEntry) -> None:
    o = entry.objectives
    print(format_summary(o.f1, o.g2, o.g3, o.feasible))


def cmd_optimize(args: argparse.Namespace, settings: Settings) -> int:
    """Run an optimizer (or the linear-array baseline) and write its archive."""
    scenario = _load_scenario(args)
    params = AlgoParams.from_settings(
        settings,
        population_size=args.pop,
        max_iterations=args.iters,
        delta1=args.delta1,
        delta2=args.delta2,
        delta3=args.delta3,
        seed=args.seed,
    )
    run = RunService(args.out)
    manifest = _manifest("optimize", args, scenario, params.model_dump(), algorithm=args.algo)
    run.start(manifest)

    evaluator = EvaluationService(scenario, threads=args.threads or settings.threads)
    if args.algo == "laa":
        baseline = laa_baseline(scenario, args.seed)
        entry = ArchiveEntry(baseline, evaluator.evaluate(baseline))
        result = RunResult("laa", params, Archive(1, [entry]))
    else:
        optimizer = OptimizerFactory.create(args.algo, scenario, params, evaluator=evaluator)
        result = optimizer.run()

    run.write_run_result(result)
    best = select_final(result.archive)
    run.write_json("selected.json", best.to_dict())
    run.finish(manifest)

    logger.info(
        f"Selected solution: C_KE {format_rate(best.objectives.f1)}, "
        f"SLL {format_db(best.objectives.g2)}, energy {format_energy(best.objectives.g3)}"
    )
    _print_summary(best)
    return 0


def cmd_evaluate(args: argparse.Namespace, settings: Settings) -> int:
    """Evaluate one solution against a scenario."""
    scenario = _load_scenario(args)
    solution = load_solution(args.solution).check_against(scenario)
    grid = direction_grid(scenario.array.d_theta, scenario.array.d_phi)

    objectives = evaluate(scenario, solution, grid)
    payload = {
        "objectives": objectives.to_dict(),
        "secrecy_all": secrecy_report(scenario, solution, "all", grid).to_dict(),
    }
    if args.out:
        run = RunService(args.out)
        manifest = _manifest("evaluate", args, scenario, {"solution_path": str(args.solution)})
        run.start(manifest)
        run.write_json("evaluation.json", payload)
        run.finish(manifest)
    else:
        print(json.dumps(payload, indent=2, sort_keys=True))

    _print_summary(ArchiveEntry(solution, objectives))
    return 0


def cmd_pattern(args: argparse.Namespace, settings: Settings) -> int:
    """Export the beam pattern of both arrays of a solution."""
    scenario = _load_scenario(args)
    solution = load_solution(args.solution).check_against(scenario)
    grid = direction_grid(scenario.array.d_theta, scenario.array.d_phi)

    run = RunService(args.out)
    manifest = _manifest("pattern", args, scenario, {"solution_path": str(args.solution)})
    run.start(manifest)

    arrays = steered_arrays(scenario, solution.positions, solution.weights, solution.receivers)
    for i, array in enumerate(arrays, start=1):
        aim = link_geometry(array.config.center, array.receiver)
        pattern = beam_pattern(
            array.config,
            aim.theta,
            aim.phi,
            grid,
            scenario.comm.efficiency,
            scenario.array.mainlobe,
        )
        run.record(write_pattern_csv(pattern, run.path(f"pattern_uvaa{i}.csv")))
        print(f"uvaa{i} gain={pattern.gain!r} max_sll_db={pattern.max_sll_db!r}")
    run.finish(manifest)
    return 0


def cmd_robustness(args: argparse.Namespace, settings: Settings) -> int:
    """Monte Carlo study of a solution under one perturbation kind."""
    scenario = _load_scenario(args)
    solution = load_solution(args.solution).check_against(scenario)
    spec = PerturbSpec(
        kind=args.kind,
        trials=args.trials,
        seed=args.seed,
        q1=args.q1 if args.q1 is not None else settings.phase_q1,
        q2=args.q2 if args.q2 is not None else settings.phase_q2,
        delta_t=args.delta_t if args.delta_t is not None else settings.phase_delta_t,
        codebook_size=args.codebook,
        drift=args.drift,
    )

    run = RunService(args.out)
    manifest = _manifest(
        "robustness", args, scenario, {"solution_path": str(args.solution), **asdict(spec)}
    )
    run.start(manifest)

    stats = monte_carlo(scenario, solution, spec)
    run.write_csv("robustness.csv", ["trial", "f1_bps", "f2_db"], stats.rows())
    run.write_json("robustness_summary.json", {"spec": asdict(spec), **stats.to_dict()})
    run.finish(manifest)

    f1, f2 = stats.f1_summary, stats.f2_summary
    print(
        f"trials={stats.trials} f1_mean_bps={f1['mean']!r} f1_std_bps={f1['std']!r} "
        f"f2_mean_db={f2['mean']!r} f2_std_db={f2['std']!r}"
    )
    return 0


def cmd_baseline(args: argparse.Namespace, settings: Settings) -> int:
    """Build and evaluate the linear-array baseline."""
    scenario = _load_scenario(args)
    baseline = laa_baseline(scenario, args.seed)

    run = RunService(args.out)
    manifest = _manifest("baseline", args, scenario, {}, algorithm="laa")
    run.start(manifest)

    entry = ArchiveEntry(baseline, evaluate(scenario, baseline))
    run.write_json("baseline_solution.json", entry.to_dict())
    run.finish(manifest)
    _print_summary(entry)
    return 0


def cmd_generate(args: argparse.Namespace, settings: Settings) -> int:
    """Write a reproducible random scenario file."""
    scenario = random_scenario(
        args.seed,
        args.n_uav,
        args.known,
        args.unknown,
        ground_margin=settings.ground_margin,
        d_min=args.d_min,
        array=ArrayParams(
            d_theta_deg=settings.grid_step_deg,
            d_phi_deg=settings.grid_step_deg,
            mainlobe_deg=settings.mainlobe_deg,
        ),
    )
    path = save_scenario(scenario, args.output)
    logger.info(f"Scenario written to {path}")
    print(path)
    return 0
