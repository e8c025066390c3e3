"""
Artifact Writers
================

Deterministic CSV/JSON tables, the run manifest and the error record.

Numbers are written with 17 significant digits so that every double survives
a write/read cycle exactly; line endings are always "\\n".
"""

import csv
import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np
import structlog

from kapitza.models.schemas import OutputFormat, RunManifest

logger = structlog.get_logger(__name__)

SCHEMA_VERSION = 1


def format_value(value: Any) -> str:
    """CSV text of a single cell."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def write_table(
    out_dir: Path,
    name: str,
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    fmt: OutputFormat = OutputFormat.CSV,
) -> str:
    """
    Write one table as ``<name>.csv`` or ``<name>.json``.

    Returns:
        The file name written, relative to out_dir.
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = [list(r) for r in rows]
    for r in rows:
        if len(r) != len(columns):
            raise ValueError(f"row has {len(r)} cells, header has {len(columns)}")

    if fmt == OutputFormat.JSON:
        filename = f"{name}.json"
        payload = {
            "schema_version": SCHEMA_VERSION,
            "columns": list(columns),
            "rows": [[_json_value(v) for v in r] for r in rows],
        }
        (out_dir / filename).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    else:
        filename = f"{name}.csv"
        with open(out_dir / filename, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(columns)
            for r in rows:
                writer.writerow([format_value(v) for v in r])

    logger.debug("table written", file=filename, rows=len(rows))
    return filename


def read_csv(path: Path) -> List[Dict[str, str]]:
    """Rows of a CSV artifact as dictionaries of raw strings."""
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def write_manifest(out_dir: Path, manifest: RunManifest) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "manifest.json"
    path.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path


def write_error(out_dir: Path, record: Dict[str, Any]) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "error.json"
    path.write_text(json.dumps(record, indent=2, default=str) + "\n", encoding="utf-8")
    return path
