"""Regenerate the data behind every figure from the JSON sweeps in configs/.

    python3 scripts/regenerate_figures.py [--configs DIR] [--out DIR]

Writes one CSV per config file; plotting is left to external tools.
"""
import argparse
import json
import sys
import time
from pathlib import Path

from patmsts.cli import main as cli_main

ROOT = Path(__file__).resolve().parent.parent


def run(config_dir: Path, out_dir: Path) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    worst = 0
    for cfg in sorted(config_dir.glob("*.json")):
        command = json.loads(cfg.read_text())["command"]
        target = out_dir / f"{cfg.stem}.csv"
        start = time.perf_counter()
        code = cli_main([command, "--config", str(cfg), "--out", str(target)])
        print(f"{cfg.name:32s} -> {target.name:36s} exit {code}  {time.perf_counter() - start:6.2f}s")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--configs", type=Path, default=ROOT / "configs")
    ap.add_argument("--out", type=Path, default=ROOT / "figure_data")
    args = ap.parse_args()
    sys.exit(run(args.configs, args.out))
