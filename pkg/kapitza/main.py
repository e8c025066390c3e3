"""
floquet-kapitza CLI
===================

Usage:
    floquet-kapitza <command> --config PATH [--out DIR] [--format csv|json]

Commands: classical, veff, floquet, scan, evolve, resonator.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

import structlog

from kapitza import __version__
from kapitza.errors import KapitzaError
from kapitza.log_config import configure_logging
from kapitza.models.schemas import Command, OutputFormat
from kapitza.runner import parse_config, run
from kapitza.services.artifacts import write_error

logger = structlog.get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="floquet-kapitza",
        description="Kapitza stabilization by real and imaginary oscillating potentials",
    )
    parser.add_argument("command", choices=[c.value for c in Command], help="Computation to run")
    parser.add_argument("--config", required=True, type=Path, help="TOML or JSON run file")
    parser.add_argument("--out", type=Path, default=None, help="Output directory (overrides output_dir)")
    parser.add_argument(
        "--format",
        choices=[f.value for f in OutputFormat],
        default=None,
        help="Table format (overrides format)",
    )
    parser.add_argument("--log-level", default=None, help="Logging level (default from settings)")
    parser.add_argument("--log-format", choices=["json", "console"], default=None)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level, args.log_format)

    out_dir = args.out
    try:
        config = parse_config(args.config, args.command)
        updates = {}
        if args.out is not None:
            updates["output_dir"] = str(args.out)
        if args.format is not None:
            updates["format"] = OutputFormat(args.format)
        config = config.model_copy(update=updates)
        out_dir = Path(config.output_dir)

        manifest = run(config, out_dir)
    except KapitzaError as e:
        record = e.to_record()
        logger.error("run failed", **record)
        print(json.dumps(record, default=str), file=sys.stderr)
        if out_dir is not None:
            write_error(out_dir, record)
        return e.exit_code

    print(json.dumps({"manifest": str(out_dir / "manifest.json"), "results": manifest.results}))
    return 0


if __name__ == "__main__":
    sys.exit(main())
