#!/usr/bin/env python3
"""Sweep every verification suite over a matrix of chamber elements.

Covers regular and wall chambers for n = 2..5 (plus n = 6 for the
factorization suite), prints one line per suite and configuration, and
optionally writes the full report list as JSON.

    python3 scripts/run_full_verification.py --samples 25 --json sweep.json
"""

import argparse
import json
import sys
import time

from orbitsym import SUITE_NAMES, SpecialLinearModel, run_suite

CONFIGS = [
    ("regular", [1, -1]),
    ("wall", [0, 0]),
    ("regular", [1, 0, -1]),
    ("wall", [1, 1, -2]),
    ("regular", [1.5, 0.5, -0.5, -1.5]),
    ("wall", [1, 1, -1, -1]),
    ("regular", [2, 1, 0, -1, -2]),
    ("wall", [1, 1, 1, 1, -4]),
    ("regular", [2.5, 1.5, 0.5, -0.5, -1.5, -2.5]),
]

# The flag-chart suites grow quickly with the orbit dimension; cap the
# sample counts there so the whole sweep stays interactive.
EXPENSIVE = {"theorem", "lagrangian-vertical", "lagrangian-horizontal"}
SUITES_AT_N6 = {"iwasawa", "infinitesimal"}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=25)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--json", dest="json_path", default=None)
    args = parser.parse_args()

    all_reports = []
    failures = 0
    started = time.perf_counter()
    for kind, entries in CONFIGS:
        n = len(entries)
        chamber = SpecialLinearModel(n).chamber_element(entries)
        label = f"n={n} {kind} H={','.join(f'{e:g}' for e in chamber.entries)}"
        print(label)
        for name in SUITE_NAMES:
            if n >= 6 and name not in SUITES_AT_N6:
                continue
            samples = args.samples
            if name in EXPENSIVE and chamber.orbit_dim >= 12:
                samples = min(samples, 10)
            reports = run_suite(chamber, name, samples=samples, seed=args.seed)
            all_reports += [r.as_dict() for r in reports]
            ok = all(r.passed for r in reports)
            failures += 0 if ok else 1
            worst = max(reports, key=lambda r: r.max_error / r.tolerance)
            print(
                f"  {name:<22} samples={samples:<4d} "
                f"max_error={worst.max_error:10.3e} tol={worst.tolerance:8.1e} "
                f"{'PASS' if ok else 'FAIL'}"
            )
    elapsed = time.perf_counter() - started
    print(f"done in {elapsed:.1f}s, {failures} failing suite runs")

    if args.json_path:
        with open(args.json_path, "w", encoding="utf-8") as fh:
            json.dump(all_reports, fh, indent=2)
            fh.write("\n")
        print(f"wrote {len(all_reports)} reports to {args.json_path}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
