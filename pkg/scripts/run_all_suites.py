"""Run every verification suite and write one JSON report per suite.

usage: python3 scripts/run_all_suites.py [--out-dir reports] [--seed 42] [--jobs 1]
"""

import argparse
import sys
from pathlib import Path

from covkit import io
from covkit.suites import SUITES, SuiteConfig, run_suite


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out-dir", default="reports")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--band", type=float, default=0.05)
    a = p.parse_args()
    out = Path(a.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cfg = SuiteConfig(seed=a.seed, jobs=a.jobs, band=a.band)
    ok = True
    for name in SUITES:
        rep = run_suite(name, cfg)
        io.write_json(rep.as_dict(), out / f"{name}.json")
        ok &= rep.passed
        print(f"{'PASS' if rep.passed else 'FAIL'} {name:12s} {rep.wall_time:6.1f} s")
        for c in rep.checks:
            if not c.passed:
                print(f"     {c.name}: {c.residual:.3g} vs {c.tolerance:.3g}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
