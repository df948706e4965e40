"""Structural (epi + flat) versus elementwise perfectness on every fixture extension over GF(2).

Usage: python scripts/route_agreement.py [--max-target 9]
"""
import argparse
from collections import Counter

from ringquot.battery import fixture_extensions
from ringquot.perfectness import perfectness_report


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-target", type=int, default=9)
    args = ap.parse_args()
    verdicts, disagree = Counter(), []
    for name, ext in fixture_extensions("GF(2)", max_target=args.max_target):
        rep = perfectness_report(ext)
        verdicts[rep.verdict] += 1
        flag = "" if rep.routes_agree else "  DISAGREE"
        print(f"{name:40s} {ext.source.dim:2d} -> {ext.target.dim:2d}  {rep.verdict:18s} [{rep.label}]{flag}")
        if not rep.routes_agree:
            disagree.append(name)
    print(f"{sum(verdicts.values())} extensions: {dict(sorted(verdicts.items()))}; disagreements: {len(disagree)}")


if __name__ == "__main__":
    main()
