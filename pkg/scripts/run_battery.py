"""Seeded random extensions and bimodules over GF(2); per-check failure counts.

Usage: python scripts/run_battery.py [--seed 0] [--count 200] [--max-dim 6] [--verbose]
"""
import argparse
import time
from collections import Counter
from dataclasses import asdict

from ringquot.battery import BatteryConfig, run_battery


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--max-dim", type=int, default=6)
    ap.add_argument("--verbose", action="store_true", help="one line per case")
    args = ap.parse_args()
    cfg = BatteryConfig(seed=args.seed, count=args.count, max_dim=args.max_dim)

    t0 = time.perf_counter()
    res = run_battery(cfg)
    secs = time.perf_counter() - t0

    ran, failed = Counter(), Counter()
    for c in res.cases:
        ran.update(c.checks)
        failed.update(c.failures)
        if args.verbose or c.failures:
            mark = "FAIL " + ",".join(c.failures) if c.failures else "ok"
            print(f"{c.index:4d} {c.extension:28s} {c.module:28s} dims {c.dims}  {mark}")
    print(f"config {asdict(cfg)}  ({secs:.1f}s)")
    print(f"coverage {res.coverage()}")
    width = max(map(len, ran))
    for name in sorted(ran):
        print(f"  {name:{width}s}  ran {ran[name]:4d}  failed {failed[name]:3d}")


if __name__ == "__main__":
    main()
