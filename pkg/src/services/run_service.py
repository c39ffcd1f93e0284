"""Run service - output directory, manifest and artifact writers for one command."""

import os
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from loguru import logger

from src import __version__
from src.optimizers.base import RunResult
from src.optimizers.rsi import THRESHOLD_HEADER
from src.utils import sha256_file, write_csv, write_json

MANIFEST_NAME = "manifest.json"
CONVERGENCE_HEADER = ["iteration", "best_f1_bps", "best_f2_db", "best_f3_j", "archive_size"]


def manifest_timestamp() -> str:
    """UTC timestamp, pinned by SOURCE_DATE_EPOCH when set."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    moment = (
        datetime.fromtimestamp(int(epoch), tz=timezone.utc)
        if epoch
        else datetime.now(timezone.utc)
    )
    return moment.replace(microsecond=0).isoformat()


@dataclass
class RunManifest:
    """Everything needed to repeat a command."""

    command: str
    scenario_path: str | None
    scenario_sha256: str | None
    algorithm: str | None
    seed: int | None
    params: dict[str, Any]
    output_dir: str
    timestamp: str = field(default_factory=manifest_timestamp)
    version: str = __version__
    artifacts: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


class RunService:
    """Owns one output directory and keeps track of what was written to it."""

    def __init__(self, output_dir: str | Path):
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self._written: list[Path] = []

    def path(self, name: str) -> Path:
        return self.output_dir / name

    def start(self, manifest: RunManifest) -> Path:
        """Write the manifest before any computation starts."""
        path = write_json(self.path(MANIFEST_NAME), manifest.to_dict())
        logger.info(f"Run manifest written to {path}")
        return path

    def write_json(self, name: str, payload: Any) -> Path:
        path = write_json(self.path(name), payload)
        self._written.append(path)
        logger.info(f"Wrote {path}")
        return path

    def write_csv(self, name: str, header: list[str], rows) -> Path:
        path = write_csv(self.path(name), header, rows)
        self._written.append(path)
        logger.info(f"Wrote {path}")
        return path

    def record(self, path: Path) -> Path:
        """Track an artifact written by another module."""
        self._written.append(Path(path))
        logger.info(f"Wrote {path}")
        return Path(path)

    def write_run_result(self, result: RunResult) -> None:
        """Archive JSON, convergence log and threshold log of an optimizer run."""
        self.write_json("archive.json", result.archive.to_list())
        self.write_csv(
            "convergence.csv", CONVERGENCE_HEADER, (row.as_row() for row in result.convergence)
        )
        self.write_csv(
            "thresholds.csv", THRESHOLD_HEADER, (snap.as_row() for snap in result.thresholds)
        )

    def finish(self, manifest: RunManifest) -> Path:
        """Rewrite the manifest with SHA-256 checksums of every artifact."""
        manifest.artifacts = {p.name: sha256_file(p) for p in sorted(self._written)}
        return write_json(self.path(MANIFEST_NAME), manifest.to_dict())
