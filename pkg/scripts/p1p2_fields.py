"""Write covariogram fields of P1, P2 and their difference as CSV for plotting.

usage: python3 scripts/p1p2_fields.py [--step 0.5] [--out-dir fields]
"""

import argparse
from dataclasses import replace
from pathlib import Path

import numpy as np

from covkit.covariogram import covariogram_grid
from covkit.gallery import p1_p2


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--step", type=float, default=0.5)
    p.add_argument("--out-dir", default="fields")
    a = p.parse_args()
    out = Path(a.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    P1, P2 = p1_p2()
    f1 = covariogram_grid(P1, a.step, body_id="P1")
    f2 = covariogram_grid(P2, a.step, body_id="P2")
    f1.to_csv(out / "g_p1.csv")
    f2.to_csv(out / "g_p2.csv")
    diff = f1.values - f2.values
    replace(f1, body_id="P1-P2", values=diff).to_csv(out / "g_p1_minus_p2.csv")
    X, Y = np.meshgrid(*f1.axes())
    i = np.unravel_index(np.argmax(np.abs(diff)), diff.shape)
    print(f"grid {f1.nx}x{f1.ny}, max |g1 - g2| = {np.abs(diff).max():.4g} at ({X[i]:.2f}, {Y[i]:.2f})")


if __name__ == "__main__":
    main()
