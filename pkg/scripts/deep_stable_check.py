"""Deep-stable regime: exact force over the cubic closed form, and the thermal ratios.

    python3 scripts/deep_stable_check.py
"""

import argparse
import math

import numpy as np

from qfriction.friction import (
    force_deep_stable,
    force_exact,
    force_exact_thermal,
    thermal_factor,
)
from qfriction.numerics import fit_log_slope
from qfriction.stability import gamma_from_epsilon


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--gamma", type=float, default=0.1)
    ap.add_argument("--tol", type=float, default=1e-4)
    args = ap.parse_args(argv)

    print("eta      exact          closed form    ratio")
    pts = []
    for eta in np.geomspace(0.03, 0.3, 9):
        ex = force_exact(float(eta), args.gamma, tol=args.tol).value
        cf = force_deep_stable(float(eta), args.gamma).value
        pts.append((math.log(eta), math.log(-ex)))
        print(f"{eta:.4f}  {ex:.6e}  {cf:.6e}  {ex / cf:.4f}")
    for lo, hi in ((0.03, 0.06), (0.05, 0.2)):
        sel = [p for p in pts if math.log(lo) - 1e-9 <= p[0] <= math.log(hi) + 1e-9]
        print(f"log slope on [{lo}, {hi}]: {fit_log_slope(sel).slope:.4f}")

    eta = 0.5
    G = gamma_from_epsilon(0.03, eta)
    base = force_exact(eta, G).value
    print("\ntheta  thermal/zero-T  coth(1/(2 theta))")
    for theta in (0.1, 0.25, 0.5, 1.0, 2.0, 5.0):
        r = force_exact_thermal(eta, G, theta).value / base
        print(f"{theta:5.2f}  {r:14.4f}  {thermal_factor(theta):10.4f}")


if __name__ == "__main__":
    main()
