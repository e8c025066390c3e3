"""
Run Configuration and Execution
===============================

parse_config reads a TOML or JSON run file into a validated RunConfig;
run dispatches it to its command handler and writes the manifest.
"""

import json
import time
import tomllib
from pathlib import Path
from typing import Any, Dict, Optional, Union

import pydantic
import structlog

from kapitza import __version__
from kapitza.commands import COMMANDS
from kapitza.errors import ParseError, ValidationError
from kapitza.models.schemas import Command, PotentialSpec, RunConfig, RunManifest
from kapitza.services.artifacts import write_manifest

logger = structlog.get_logger(__name__)

PathLike = Union[str, Path]

# keys that may sit at the top level of a file and belong to [potential]
_POTENTIAL_KEYS = set(PotentialSpec.model_fields) | {"period"}


# =============================================================================
# Parsing
# =============================================================================

def _load(path: Path) -> Dict[str, Any]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read config: {e}", {"path": str(path)}) from e

    suffix = path.suffix.lower()
    try:
        if suffix == ".toml":
            data = tomllib.loads(text)
        elif suffix == ".json":
            data = json.loads(text)
        else:
            raise ParseError(
                f"unsupported config format '{suffix}'",
                {"path": str(path), "supported": [".toml", ".json"]},
            )
    except tomllib.TOMLDecodeError as e:
        raise ParseError(f"invalid TOML: {e}", {"path": str(path)}) from e
    except json.JSONDecodeError as e:
        raise ParseError(
            f"invalid JSON: {e.msg}",
            {"path": str(path), "line": e.lineno, "column": e.colno},
        ) from e

    if not isinstance(data, dict):
        raise ParseError("config must be a table of sections", {"path": str(path)})
    return data


def _hoist_potential(data: Dict[str, Any]) -> Dict[str, Any]:
    """Move top-level potential keys (v0 = 9, beta = 0.02, ...) into [potential]."""
    flat = {k: data[k] for k in data if k in _POTENTIAL_KEYS}
    if not flat:
        return data
    if "potential" in data:
        raise ParseError(
            "potential keys given both at top level and in [potential]",
            {"keys": sorted(flat)},
        )
    rest = {k: v for k, v in data.items() if k not in flat}
    rest["potential"] = flat
    return rest


def _field_name(loc) -> str:
    names = [str(part) for part in loc if isinstance(part, str)]
    return names[-1] if names else "config"


def _translate(error: pydantic.ValidationError, path: Path):
    """Map the first pydantic error onto ParseError or ValidationError."""
    first = error.errors()[0]
    loc = first.get("loc", ())
    dotted = ".".join(str(part) for part in loc)
    name = _field_name(loc)
    kind = first.get("type", "")
    ctx = first.get("ctx") or {}

    if kind == "extra_forbidden":
        return ParseError(f"unknown key '{name}'", {"path": str(path), "key": dotted})

    if kind == "greater_than" and ctx.get("gt") == 0:
        message = f"{name} must be positive"
    elif kind == "greater_than_equal" and ctx.get("ge") == 0:
        message = f"{name} must not be negative"
    elif kind == "missing":
        message = f"{name} is required"
    elif kind == "value_error" and "error" in ctx:
        message = str(ctx["error"])
    else:
        message = f"{name}: {first.get('msg', 'invalid value')}"
    return ValidationError(message, {"path": str(path), "field": dotted, "errors": error.error_count()})


def parse_config(path: PathLike, command: Optional[Union[Command, str]] = None) -> RunConfig:
    """
    Read and validate a run file.

    Args:
        path: TOML or JSON file
        command: Command from the command line; fills in a missing
            ``command`` key and must agree with a present one

    Raises:
        ParseError: unreadable or malformed file, unknown key
        ValidationError: a value violating a parameter invariant
    """
    path = Path(path)
    data = _hoist_potential(_load(path))

    if command is not None:
        command = Command(command)
        declared = data.get("command")
        if declared is not None and declared != command.value:
            raise ParseError(
                f"config declares command '{declared}' but '{command.value}' was requested",
                {"path": str(path), "key": "command"},
            )
        data["command"] = command.value

    try:
        config = RunConfig.model_validate(data)
    except pydantic.ValidationError as e:
        raise _translate(e, path) from e

    logger.debug("config parsed", path=str(path), command=config.command.value)
    return config


def serialize_config(config: RunConfig, path: PathLike) -> Path:
    """Write config as JSON that parse_config reads back to an equal RunConfig."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(config.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path


# =============================================================================
# Execution
# =============================================================================

def run(config: RunConfig, out_dir: Optional[PathLike] = None) -> RunManifest:
    """
    Execute the configured command and write its artifacts and manifest.json.

    Numerical failures propagate as NumericalError subclasses.
    """
    out = Path(out_dir or config.output_dir)
    handler = COMMANDS[config.command]

    logger.info("run started", command=config.command.value, out_dir=str(out))
    started = time.perf_counter()
    result = handler(config, out)
    elapsed = time.perf_counter() - started

    manifest = RunManifest(
        library_version=__version__,
        command=config.command,
        config=config.model_dump(mode="json"),
        artifacts=result.artifacts,
        timings={"total_seconds": elapsed},
        provenance=result.provenance,
        results=result.results,
    )
    write_manifest(out, manifest)
    logger.info(
        "run finished",
        command=config.command.value,
        artifacts=result.artifacts,
        seconds=round(elapsed, 3),
    )
    return manifest
