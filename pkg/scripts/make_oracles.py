"""Regenerate the frozen reference values in tests/data/oracles.json.

The references are computed without importing qfriction: scipy's nquad,
brentq and minimize_scalar and mpmath provide the independent answers.

    python3 scripts/make_oracles.py            # cheap entries only
    python3 scripts/make_oracles.py --forces   # also the slow nquad forces (~4 min)
"""

import argparse
import json
import math
import time
from pathlib import Path

import mpmath as mp
import numpy as np
from scipy import integrate, optimize

OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "oracles.json"


def gamma_beta(beta, eta):
    rad = math.exp(-4 * beta / eta) - (1 - beta * beta) ** 2
    return math.sqrt(rad / (4 * beta * beta)) if rad > 0 else -1.0


def gamma_c(eta):
    # dense brute-force scan plus bounded Brent polish
    betas = np.concatenate([np.geomspace(1e-7, 3, 20000),
                            1 + 0.5 * math.exp(-2 / eta) * np.linspace(-1, 1, 2001)])
    vals = np.array([gamma_beta(b, eta) for b in betas])
    i = int(np.argmax(vals))
    lo, hi = betas[max(i - 1, 0)], betas[min(i + 1, len(betas) - 1)]
    if hi <= lo:
        return vals[i]
    res = optimize.minimize_scalar(lambda b: -gamma_beta(b, eta), bounds=(lo, hi),
                                   method="bounded", options={"xatol": 1e-14})
    return max(-res.fun, vals[i])


def eta_c(G):
    return math.exp(optimize.brentq(lambda le: gamma_c(math.exp(le)) - G, math.log(0.05), math.log(1e5),
                                    xtol=1e-12))


def refl(w, G):
    return 1 / (w * (w + 2j * G) - 1)


def force(eta, G, theta=0.0, epsrel=1e-6):
    """Symmetric-frame force by nested QUADPACK; the integrand is even in w and y."""
    k0 = 2 / eta
    X = k0 + 15
    Y = math.sqrt(X * X - k0 * k0)
    W = 0.5 * eta * X + 40 * theta + 10

    def f(w, x, y):
        a = eta * x / 2
        rp, rm = refl(w + a, G), refl(w - a, G)
        e2 = math.exp(-2 * math.hypot(x, y))
        val = x / (2 * math.pi ** 3) * rm.imag * rp.imag * e2 / abs(1 - rm * rp * e2) ** 2
        if theta > 0:
            val *= 0.5 * (1 / math.tanh((w + a) / (2 * theta)) - 1 / math.tanh((w - a) / (2 * theta)))
        return val

    def wlim(x, y):
        return [0, eta * x / 2] if theta == 0 else [0, W]

    def wopt(x, y):
        a = eta * x / 2
        e2 = math.exp(-2 * math.hypot(x, y))
        # quartic in w: (w+ (w+ + 2iG) - 1)(w- (w- + 2iG) - 1) - e2
        p = np.polymul([1, 2 * a + 2j * G, a * a + 2j * G * a - 1],
                       [1, -2 * a + 2j * G, a * a - 2j * G * a - 1])
        p[-1] -= e2
        hi = wlim(x, y)[1]
        pts = sorted({r.real for r in np.roots(p) if 0 < r.real < hi} | ({a} if theta else set()))
        return {"epsrel": epsrel, "limit": 500, "points": pts}

    hw = 0.5 * k0 * math.exp(-k0)
    xo = {"epsrel": 10 * epsrel, "limit": 500, "points": [k0 - hw, k0, k0 + hw]}
    yo = {"epsrel": 10 * epsrel, "limit": 500, "points": [0.05, 0.2, 1.0]}
    v, _ = integrate.nquad(f, [wlim, [0, X], [0, Y]], opts=[wopt, xo, yo])
    return 4 * v


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--forces", action="store_true", help="include the slow force integrals")
    args = ap.parse_args()
    data = json.loads(OUT.read_text()) if OUT.exists() else {}

    mp.mp.dps = 30
    data["quad"] = {
        "exp_decay": float((1 - mp.e ** -40) / 2),
        "asinh_1e-4": float(2 * mp.asinh(1 / (2 * mp.sqrt(2e-4)))),
        "x4_exp_quarter": float(mp.quad(lambda t: mp.cos(t) ** 4, [0, mp.pi / 2]) * mp.factorial(5) / 2 ** 6),
    }
    data["gamma_c"] = {str(e): gamma_c(e) for e in (0.2, 0.3, 0.5, 1.0, 2.0, 10.0, 1e3)}
    data["eta_c"] = {str(g): eta_c(g) for g in (1e-4, 1e-3, 1e-2, 2e-2, 0.05)}

    if args.forces:
        forces = data.setdefault("force", {})
        cases = [(0.1, 0.1, 0.0), (0.2, 0.1, 0.0), (0.3, 0.1, 0.0)]
        cases += [(0.5, 0.5 * math.exp(-4) * (1 + e), 0.0) for e in (0.1, 0.03, 0.01, 0.003)]
        cases += [(0.5, 0.5 * math.exp(-4) * 1.03, 2.0)]
        for eta, G, th in cases:
            t0 = time.time()
            key = f"{eta!r}|{G!r}|{th!r}"
            forces[key] = force(eta, G, th)
            print(key, forces[key], f"{time.time() - t0:.0f}s", flush=True)
            OUT.write_text(json.dumps(data, indent=1) + "\n")
    OUT.write_text(json.dumps(data, indent=1) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
