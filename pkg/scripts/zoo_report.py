#!/usr/bin/env python3
"""Classify a topology directory and compare the shares with reference values.

Writes report.csv, report.json and bars.svg into --out and prints each
aggregate next to its reference with the difference in percentage points.
"""

import argparse
import sys
from pathlib import Path

from failover.classifier import MinorBudget
from failover.report import ReportConfig, export, load_dataset, run_report

REFERENCE = {
    "destination.Impossible.percent": 42.5,
    "destination.Unknown.percent": 1.1,
    "source_destination.Impossible.percent": 2.7,
    "source_destination.Unknown.percent": 31.8,
    "sometimes.mean_fraction_percent": 21.3,
    "planar_not_outerplanar.percent": 55.8,
}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("dir", type=Path)
    ap.add_argument("--out", type=Path, default=Path("zoo-report"))
    ap.add_argument("--budget", type=int, default=20000, help="minor-search states per query")
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--tolerance", type=float, default=3.0)
    args = ap.parse_args()

    d = load_dataset(args.dir)
    rep = run_report(d, ReportConfig(MinorBudget(max_states=args.budget), args.workers))
    for fmt, name in (("csv", "report.csv"), ("json", "report.json"), ("svg-bars", "bars.svg")):
        export(rep, fmt, args.out / name)

    print(f"{len(d)} networks, dataset sha256 {rep.metadata['dataset_sha256'][:16]}")
    worst = 0.0
    for key, ref in REFERENCE.items():
        got = float(rep.aggregates[key])
        worst = max(worst, abs(got - ref))
        print(f"{key:40s} {got:6.2f}  ref {ref:5.1f}  diff {got - ref:+6.2f}")
    return 0 if worst <= args.tolerance else 1


if __name__ == "__main__":
    sys.exit(main())
