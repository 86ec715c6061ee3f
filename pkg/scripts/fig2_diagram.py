"""Stability boundary Gamma_c(eta) with the two asymptotic laws alongside.

    python3 scripts/fig2_diagram.py --out fig2.csv
"""

import argparse
import csv
import math
import sys

import numpy as np

from qfriction.stability import GAMMA_SAT, critical_gamma


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--eta-min", type=float, default=0.15)
    ap.add_argument("--eta-max", type=float, default=1e5)
    ap.add_argument("--n", type=int, default=120)
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)

    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["eta", "gamma_c", "beta_star", "weak_law", "strong_law"])
    for eta in np.geomspace(args.eta_min, args.eta_max, args.n):
        bp = critical_gamma(float(eta))
        weak = 0.5 * math.exp(-2.0 / eta)
        # 1/2 - Gamma_c^2 ~ (3/4)(2/eta)^(2/3) for eta >> 1
        strong = math.sqrt(max(0.5 - 0.75 * (2.0 / eta) ** (2.0 / 3.0), 0.0))
        w.writerow([repr(float(eta)), repr(bp.gamma_c), repr(bp.beta_star), repr(weak), repr(strong)])
    if out is not sys.stdout:
        out.close()
    print(f"saturation value 1/sqrt(2) = {GAMMA_SAT:.6f}", file=sys.stderr)


if __name__ == "__main__":
    main()
