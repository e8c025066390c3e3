#!/usr/bin/env python3
"""
Example Config Runner
=====================

Runs every bundled config through the CLI and reports the headline numbers.

Usage:
    python scripts/run_configs.py [--configs DIR] [--out DIR] [--only NAME ...]
"""

import argparse
import json
import sys
import time
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from kapitza.main import main as cli_main
from kapitza.runner import parse_config

HEADLINES = {
    "classical": ["stable_points", "mean_re_theta_final_half"],
    "veff": ["min_v_eff", "bound_energies"],
    "floquet": ["bound_count", "bound_epsilons", "max_abs_im_eps"],
    "scan": ["omega_th"],
    "evolve": ["final_abs_survival", "final_norm"],
    "resonator": ["confined_count", "confined_energies", "effective_bound_energy"],
}


def run_one(path: Path, out_root: Path) -> bool:
    config = parse_config(path)
    command = config.command.value
    out = out_root / path.stem

    print(f"▶️  {path.name} ({command})")
    started = time.perf_counter()
    code = cli_main([command, "--config", str(path), "--out", str(out), "--log-level", "WARNING"])
    elapsed = time.perf_counter() - started

    if code != 0:
        error = json.loads((out / "error.json").read_text())
        print(f"   ❌ exit {code}: {error['error']}: {error['message']}")
        return False

    results = json.loads((out / "manifest.json").read_text())["results"]
    print(f"   ✅ {elapsed:.1f}s")
    for key in HEADLINES.get(command, []):
        print(f"   {key}: {results.get(key)}")
    return True


def main() -> int:
    parser = argparse.ArgumentParser(description="Run the bundled example configs")
    parser.add_argument("--configs", type=Path, default=Path(__file__).parent.parent / "configs")
    parser.add_argument("--out", type=Path, default=Path("out"))
    parser.add_argument("--only", nargs="*", default=None, help="Config stems to run")
    args = parser.parse_args()

    paths = sorted(args.configs.glob("*.toml"))
    if args.only:
        paths = [p for p in paths if p.stem in args.only]

    print("🧪 floquet-kapitza example runs")
    print("=" * 50)
    passed = sum(run_one(p, args.out) for p in paths)
    print("=" * 50)
    print(f"{passed}/{len(paths)} runs succeeded")
    return 0 if passed == len(paths) else 1


if __name__ == "__main__":
    sys.exit(main())
