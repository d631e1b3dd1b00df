#!/usr/bin/env python3
"""Run every verification suite with the shipped defaults and print the
verdict table; equivalent to `morreylab verify` but importable/hackable.

Pass suite names as arguments to restrict, e.g.

    python scripts/run_verification.py boundedness apriori
"""

import sys
import time

from morreylab import harness


def main(argv) -> int:
    names = argv or sorted(harness.SUITES)
    cfg = harness.default_config()
    results = []
    for name in names:
        t0 = time.time()
        res = harness.run_suite(name, cfg)
        results.append(res)
        print(f"{name:12s} {res.verdict:10s} fitted={res.fitted_constant:.4g} "
              f"({time.time() - t0:.0f}s)")
        for note in res.notes:
            print(f"{'':12s} - {note}")
    harness.write_reports(results, cfg.get("out", "out"))
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
