"""Formatting and serialization helpers shared by the toolkit."""

import csv
import hashlib
import json
import math
from collections.abc import Iterable
from pathlib import Path
from typing import Any

import numpy as np


def format_float(value: float) -> str:
    """Shortest text that round-trips to the same float.

    Args:
        value: Number to format

    Returns:
        repr of the float (``nan``/``inf`` kept as Python spells them)
    """
    return repr(float(value))


def format_rate(bps: float) -> str:
    """Format a rate for display, e.g. ``2.14e+06 bps``."""
    return f"{bps:.4g} bps"


def format_db(value: float) -> str:
    return f"{value:.2f} dB"


def format_energy(joules: float) -> str:
    """Format an energy for display, switching to kJ above 10 kJ."""
    if abs(joules) >= 1e4:
        return f"{joules / 1e3:.2f} kJ"
    return f"{joules:.2f} J"


def format_summary(f1: float, f2: float, f3: float, feasible: bool) -> str:
    """Stable one-line summary of a selected solution.

    The line is parsed by scripts, so field order and spelling must not change.
    """
    return (
        f"f1_bps={format_float(f1)} f2_db={format_float(f2)} f3_j={format_float(f3)} "
        f"feasible={str(feasible).lower()}"
    )


def to_jsonable(value: Any) -> Any:
    """Convert numpy containers and scalars to plain JSON types."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        return number if math.isfinite(number) else None
    return value


def write_json(path: str | Path, payload: Any) -> Path:
    """Write JSON with sorted keys so identical payloads give identical bytes."""
    file_path = Path(path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(to_jsonable(payload), indent=2, sort_keys=True)
    file_path.write_text(text + "\n", encoding="utf-8")
    return file_path


def write_csv(path: str | Path, header: list[str], rows: Iterable[Iterable[Any]]) -> Path:
    """Write a CSV file, formatting floats at full precision."""
    file_path = Path(path)
    file_path.parent.mkdir(parents=True, exist_ok=True)
    with file_path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                format_float(cell) if isinstance(cell, (float, np.floating)) else cell
                for cell in row
            )
    return file_path


def sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with Path(path).open("rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def derive_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for a (seed, stream, ...) key.

    Streams depend only on the key, never on the order draws are made in.
    """
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))
