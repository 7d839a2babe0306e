#!/usr/bin/env python3
"""Run the full default verification suite and write the JSON report.

Usage: python scripts/run_verify.py [outfile] [--seed N]
"""

import argparse
import sys

from mixednorm.verify import SuiteConfig, report_json, run_all


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("outfile", nargs="?", default="verify_report.json")
    ap.add_argument("--seed", type=int, default=None)
    args = ap.parse_args()

    cfg = SuiteConfig(seed=args.seed) if args.seed is not None else SuiteConfig()
    report = run_all(cfg)
    with open(args.outfile, "w") as fh:
        fh.write(report_json(report))
    for sid, res in report["suites"].items():
        mark = "PASS" if res["passed"] else "FAIL"
        print(f"{mark} {sid}: {res['checks']} checks, {res['violations']} violations")
    print(f"report written to {args.outfile}")
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
