"""Multi-objective optimizers with pluggable registration."""

from src.optimizers.base import (
    AlgoParams,
    Archive,
    ArchiveEmptyError,
    ArchiveEntry,
    BaseOptimizer,
    RunResult,
)
from src.optimizers.factory import OptimizerFactory
from src.optimizers.moalo import MOALO, run_moalo
from src.optimizers.rsi import MOALORSI, run_moalo_rsi, select_final

OptimizerFactory.register("moalo", MOALO)
OptimizerFactory.register("moalo-rsi", MOALORSI)

__all__ = [
    "AlgoParams",
    "Archive",
    "ArchiveEmptyError",
    "ArchiveEntry",
    "BaseOptimizer",
    "RunResult",
    "OptimizerFactory",
    "MOALO",
    "MOALORSI",
    "run_moalo",
    "run_moalo_rsi",
    "select_final",
]
