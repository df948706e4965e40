"""Dimensions, certificates and perfectness verdicts of all seven constructions per fixture.

Usage: python scripts/fixture_summary.py [--field GF(2)] [--fixtures m2 dual_numbers ...]
"""
import argparse
import time

from ringquot.cli import FIXTURE_NAMES, QUOTIENT_TASKS, Engine, build_algebra, load_fixture
from ringquot.perfectness import perfectness_report


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--field", default="GF(2)")
    ap.add_argument("--fixtures", nargs="*", default=list(FIXTURE_NAMES))
    args = ap.parse_args()
    for name in args.fixtures:
        spec = load_fixture(name, args.field)
        t0 = time.perf_counter()
        eng = Engine(build_algebra(spec), spec.options)
        rows = []
        for task in QUOTIENT_TASKS:
            Q = eng.get(task)
            rep = perfectness_report(Q.q, seed=spec.options.seed)
            rows.append((task, Q.dim, "R" if Q.equals_source else "", rep.verdict, Q.certificate()))
        secs = time.perf_counter() - t0
        print(f"{name} over {spec.field}: dim R = {eng.R.dim}  ({secs:.1f}s)")
        for task, dim, eq, verdict, cert in rows:
            print(f"  {task:10s} {dim:3d} {eq:1s}  {verdict:18s} {cert}")


if __name__ == "__main__":
    main()
