"""Closed forms against the Fock oracle over the full equivalence grid.

    python3 scripts/oracle_sweep.py

Prints the worst relative deviation per observable family and the cutoff
used at each (r, nbar).
"""
import time
from collections import defaultdict

from patmsts.fock_oracle import OracleConfig, truncation_select
from patmsts.state_params import StateParams
from patmsts.verification import oracle_grid_checks

MN = [(m, n) for m in range(3) for n in range(3)]
R_VALUES = (0.1, 0.3, 0.6, 1.0)
NBARS = (0.0, 0.2, 1.0)


def main():
    start = time.perf_counter()
    cfg = OracleConfig()
    for nbar in NBARS:
        for r in R_VALUES:
            print(f"r={r:<4} nbar={nbar:<4} cutoff {truncation_select(StateParams(2, 2, r, nbar), cfg)}")
    checks = oracle_grid_checks(MN, R_VALUES, NBARS, cfg)
    worst = defaultdict(float)
    for c in checks:
        family = c.check.split(" [")[0]
        worst[family] = max(worst[family], c.deviation)
    for family, dev in sorted(worst.items()):
        print(f"{family:32s} {dev:.3e}")
    failed = [c.check for c in checks if c.status != "pass"]
    print(f"{len(checks)} checks, {len(failed)} failed, {time.perf_counter() - start:.1f}s")
    for name in failed:
        print("  FAIL", name)


if __name__ == "__main__":
    main()
