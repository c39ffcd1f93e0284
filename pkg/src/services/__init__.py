"""Service layer for evaluation and run orchestration."""

from src.services.evaluation_service import EvaluationService
from src.services.run_service import RunManifest, RunService

__all__ = [
    "EvaluationService",
    "RunManifest",
    "RunService",
]
