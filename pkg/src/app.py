"""Main application class for the command-line interface."""

import argparse
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

from loguru import logger
from pydantic import ValidationError

from config.config import Settings, get_settings
from src import __version__
from src.commands import (
    cmd_baseline,
    cmd_evaluate,
    cmd_generate,
    cmd_optimize,
    cmd_pattern,
    cmd_robustness,
)
from src.energy import SolutionShapeError
from src.optimizers import OptimizerFactory
from src.scenario import ScenarioError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FAILURE = 3

# Failures caused by the inputs rather than by the computation
USAGE_ERRORS = (ScenarioError, SolutionShapeError, ValidationError, OSError, ValueError)

Handler = Callable[[argparse.Namespace, Settings], int]


class UvaaApp:
    """Parses arguments, configures logging and dispatches one command."""

    def __init__(self, config: Settings):
        """Initialize the application.

        Args:
            config: Settings instance
        """
        self.config = config
        self._setup_logging()
        self.parser = self._build_parser()

    def _setup_logging(self) -> None:
        """Setup loguru sinks; standard output stays reserved for summaries."""
        logger.remove()

        logger.add(
            sys.stderr,
            format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>",
            level=self.config.log_level,
        )

        if self.config.log_dir:
            Path(self.config.log_dir).mkdir(parents=True, exist_ok=True)
            logger.add(
                str(Path(self.config.log_dir) / "uvaa_{time:YYYY-MM-DD}.log"),
                format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}",
                level=self.config.log_level,
                rotation="500 MB",
                retention="10 days",
                compression="zip",
            )

        logger.debug("Logging configured")

    def _build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog="uvaa-secure",
            description="Secure collaborative beamforming between two UAV swarms",
        )
        parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
        commands = parser.add_subparsers(dest="command", required=True)

        optimize = commands.add_parser("optimize", help="run an optimizer on a scenario")
        self._add_scenario_args(optimize)
        optimize.add_argument(
            "--algo",
            choices=[*OptimizerFactory.available_optimizers(), "laa"],
            default="moalo-rsi",
        )
        optimize.add_argument("--seed", type=int, default=0)
        optimize.add_argument(
            "--pop",
            type=int,
            default=None,
            help=f"population size (default {self.config.population_size})",
        )
        optimize.add_argument(
            "--iters",
            type=int,
            default=None,
            help=f"iterations (default {self.config.max_iterations})",
        )
        for i, default in enumerate(
            (self.config.delta1, self.config.delta2, self.config.delta3), start=1
        ):
            optimize.add_argument(
                f"--delta{i}",
                type=float,
                default=None,
                help=f"threshold factor for objective {i} (default {default})",
            )
        optimize.add_argument("--out", required=True, help="output directory")
        optimize.add_argument(
            "--threads",
            type=int,
            default=None,
            help="evaluation worker threads (default: all cores); never changes results",
        )
        optimize.set_defaults(handler=cmd_optimize)

        evaluate = commands.add_parser("evaluate", help="evaluate one solution")
        self._add_scenario_args(evaluate)
        evaluate.add_argument("--solution", required=True)
        evaluate.add_argument("--out", default=None, help="write evaluation.json here")
        evaluate.set_defaults(handler=cmd_evaluate)

        pattern = commands.add_parser("pattern", help="export beam patterns of a solution")
        self._add_scenario_args(pattern)
        pattern.add_argument("--solution", required=True)
        pattern.add_argument("--out", required=True)
        pattern.set_defaults(handler=cmd_pattern)

        robustness = commands.add_parser("robustness", help="Monte Carlo robustness study")
        self._add_scenario_args(robustness)
        robustness.add_argument("--solution", required=True)
        robustness.add_argument("--kind", choices=["phase", "csi", "jitter"], required=True)
        robustness.add_argument("--trials", type=int, default=100)
        robustness.add_argument("--seed", type=int, default=0)
        robustness.add_argument("--codebook", type=int, default=16, help="CSI codebook size M")
        robustness.add_argument("--drift", type=float, default=0.0, help="jitter radius in metres")
        robustness.add_argument("--q1", type=float, default=None)
        robustness.add_argument("--q2", type=float, default=None)
        robustness.add_argument("--delta-t", type=float, default=None)
        robustness.add_argument("--out", required=True)
        robustness.set_defaults(handler=cmd_robustness)

        baseline = commands.add_parser("baseline", help="linear-array baseline solution")
        self._add_scenario_args(baseline)
        baseline.add_argument("--seed", type=int, default=0)
        baseline.add_argument("--out", required=True)
        baseline.set_defaults(handler=cmd_baseline)

        generate = commands.add_parser("generate", help="write a random scenario file")
        generate.add_argument("--seed", type=int, default=0)
        generate.add_argument("--n-uav", type=int, default=16)
        generate.add_argument("--known", type=int, default=2)
        generate.add_argument("--unknown", type=int, default=2)
        generate.add_argument("--d-min", type=float, default=0.5)
        generate.add_argument("--output", required=True, help="scenario file to write")
        generate.set_defaults(handler=cmd_generate)

        return parser

    @staticmethod
    def _add_scenario_args(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--scenario", required=True, help="scenario JSON file")
        parser.add_argument(
            "--grid-deg",
            type=float,
            default=None,
            help="direction grid step in degrees (default: the scenario's)",
        )

    def run(self, argv: Sequence[str] | None = None) -> int:
        """Parse ``argv`` and run the selected command.

        Returns:
            0 on success, 2 for usage / validation / IO errors, 3 otherwise
        """
        try:
            args = self.parser.parse_args(argv)
        except SystemExit as e:
            return EXIT_OK if e.code in (0, None) else EXIT_USAGE

        handler: Handler = args.handler
        try:
            return handler(args, self.config)
        except USAGE_ERRORS as e:
            logger.error(f"{args.command} failed: {e}")
            return EXIT_USAGE
        except Exception:
            logger.exception(f"{args.command} failed")
            return EXIT_FAILURE


def main(argv: Sequence[str] | None = None) -> None:
    """Console script entry point."""
    try:
        config = get_settings()
    except ValidationError as e:
        logger.error(f"Invalid settings: {e}")
        sys.exit(EXIT_USAGE)

    try:
        sys.exit(UvaaApp(config).run(argv))
    except KeyboardInterrupt:
        logger.info("Received interrupt signal, stopping")
        sys.exit(130)
