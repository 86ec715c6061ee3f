"""Near-threshold force at eta = 0.5: exact integral against the reductions.

Besides the three curves this splits the exact integral into the resonant
k_x window and its flanks, which shows where the near-threshold formula loses
weight.

    python3 scripts/fig3_comparison.py --out fig3.csv
"""

import argparse
import csv
import math
import sys
import time

import numpy as np

from qfriction.friction import (
    _domain,
    _hint,
    _kernel,
    force_exact,
    force_log_asymptote,
    force_near_threshold,
    log_prefactor,
)
from qfriction.dispersion import roots_array
from qfriction.numerics import fit_log_slope, integrate_3d
from qfriction.stability import gamma_from_epsilon


def window_part(eta, Gamma, tol=1e-4):
    """Exact integral restricted to |k_x d - 2/eta| <= (1/eta) exp(-2/eta)."""
    k0d = 2.0 / eta
    half = 0.5 * k0d * math.exp(-k0d)
    x_max, y_max = _domain(eta)
    hint, _, _ = _hint(eta, Gamma, x_max, y_max)

    def poles(xs, y):
        r = roots_array(0.5 * eta * xs, np.exp(-2.0 * np.hypot(xs, y)), Gamma)
        return r.real.T, np.abs(r.imag.T)

    res = integrate_3d(lambda w, x, y: _kernel(w, x, y, eta, Gamma, 0.0),
                       ((0.0, lambda xs, y: 0.5 * eta * xs), (k0d - half, k0d + half), (0.0, y_max)),
                       hint=hint, tol_rel=tol, inner_poles=poles)
    return 4.0 * res.value


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--eta", type=float, default=0.5)
    ap.add_argument("--eps", type=float, nargs="+",
                    default=[0.002, 0.003, 0.006, 0.01, 0.02, 0.03, 0.06, 0.1])
    ap.add_argument("--tol", type=float, default=1e-4)
    ap.add_argument("--out", default="-")
    args = ap.parse_args(argv)

    eta = args.eta
    cols = ["epsilon", "exact", "exact_window", "exact_flanks", "near_threshold", "log_asymptote", "seconds"]
    rows = []
    for eps in args.eps:
        t0 = time.perf_counter()
        G = gamma_from_epsilon(eps, eta)
        ex = force_exact(eta, G, tol=args.tol).value
        win = window_part(eta, G, args.tol)
        nt = force_near_threshold(eta, G).value
        la = force_log_asymptote(eta, eps).value
        rows.append([eps, ex, win, ex - win, nt, la, time.perf_counter() - t0])
        print(f"eps={eps:g}: exact {ex:.5e}  window {win:.5e}  near {nt:.5e}  log {la:.5e}", file=sys.stderr)

    pts = [(math.log(1 / r[0]), r[1]) for r in rows if 3e-3 <= r[0] <= 3e-2]
    if len(pts) >= 3:
        fit = fit_log_slope(pts)
        print(f"slope {fit.slope:.4e} vs analytic {-log_prefactor(eta):.4e} (ratio "
              f"{fit.slope / -log_prefactor(eta):.3f}, r2 {fit.r2:.4f})", file=sys.stderr)

    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([repr(float(v)) for v in r])
    if out is not sys.stdout:
        out.close()


if __name__ == "__main__":
    main()
