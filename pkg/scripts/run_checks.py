#!/usr/bin/env python3
"""Run the verification registry and print a one-line summary per check.

Usage: python3 scripts/run_checks.py [--profile quick|full] [--seed N] [--json out.json]
"""

import argparse
import sys

from selzeta.cli import payload_for, run_suite, validate_payload


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--profile", choices=["quick", "full"], default="quick")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", default=None)
    args = ap.parse_args()

    reports = run_suite(profile=args.profile, seed=args.seed)
    width = max(len(r.check_id) for r in reports)
    for r in reports:
        flag = "pass" if r.passed else "FAIL"
        print(f"{flag}  {r.check_id:<{width}}  defect {r.defect:.3e}  tol {r.tolerance:.3e}  {r.runtime:6.2f}s")
    if args.json:
        import json

        payload = payload_for(reports, args.seed, args.profile)
        validate_payload(payload)
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
