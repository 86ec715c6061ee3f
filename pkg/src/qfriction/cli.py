"""Command-line front end.

    qfriction threshold --gamma 0.05
    qfriction diagram --eta-min 0.2 --eta-max 1e3 --n 60 --out fig2.csv
    qfriction force --eta 0.5 --epsilon 0.003 0.01 0.03 --methods exact,near_threshold
    qfriction dispersion --eta 0.5 --gamma 0 --beta-min 0 --beta-max 2 --n 201
    qfriction sweep-fig3 --out fig3.csv

Exit codes: 0 success, 2 invalid arguments, 3 instability requested,
4 convergence failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .dispersion import roots_array
from .errors import ConvergenceError, DomainError, InstabilityError, InvalidConfigError
from .friction import (
    METHODS,
    force_deep_stable,
    force_exact,
    force_exact_thermal,
    force_log_asymptote,
    force_near_threshold,
    force_thermal_asymptote,
    log_prefactor,
)
from .numerics import fit_log_slope
from .params import HBAR, K_B, PhysicalConfig, force_scale, normalize
from .stability import critical_eta, critical_gamma, gamma_from_epsilon

EXIT_OK, EXIT_ARGS, EXIT_UNSTABLE, EXIT_CONVERGENCE = 0, 2, 3, 4

FIG3_EPSILONS = (0.003, 0.006, 0.01, 0.02, 0.03, 0.06, 0.1)
FIG3_METHODS = ("exact", "near_threshold", "log_asymptote")
FORCE_COLUMNS = ("eta", "gamma", "epsilon", "theta", "method", "F_over_F0", "err",
                 "absF_over_F0", "status")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- output


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(columns, rows, meta, fmt, with_meta=True, summary=None):
    """Serialise a table as CSV (with '#' metadata lines) or JSON."""
    if fmt == "json":
        obj = {"meta": meta if with_meta else {},
               "rows": [dict(zip(columns, r)) for r in rows]}
        if summary is not None:
            obj["summary"] = summary
        return json.dumps(obj, indent=1, allow_nan=False) + "\n"
    buf = io.StringIO()
    if with_meta:
        for key, val in meta.items():
            buf.write(f"# {key}: {val}\n")
        if summary is not None:
            for key, val in summary.items():
                buf.write(f"# summary.{key}: {_cell(val)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_cell(v) for v in r])
    return buf.getvalue()


def _emit(args, text):
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")


def _meta(args, **extra):
    meta = {"tool": f"qfriction {__version__}", "command": args.command}
    meta["generated"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    meta.update({k: _cell(v) if not isinstance(v, str) else v for k, v in extra.items()})
    return meta


# ------------------------------------------------------- physical inputs


def _physical(args):
    """Reduced inputs from the physical-unit flags, or None when none are given."""
    flags = (args.omega_s_thz, args.gap_nm, args.v_mps, args.temp_k, args.gamma_rad_s)
    if all(f is None for f in flags):
        return None
    if args.omega_s_thz is None or args.gap_nm is None:
        raise UsageError("physical mode needs --omega-s-thz and --gap-nm")
    cfg = PhysicalConfig.from_thz_nm(args.omega_s_thz, args.gap_nm,
                                     v=args.v_mps or 0.0, T=args.temp_k or 0.0,
                                     gamma=args.gamma_rad_s or 0.0)
    out = {"cfg": cfg, "Gamma": cfg.gamma / (2 * cfg.omega_s),
           "theta": K_B * cfg.T / (HBAR * cfg.omega_s), "eta": None}
    if cfg.v > 0:
        out["eta"] = normalize(cfg).eta
    return out


def _add_physical(p):
    g = p.add_argument_group("physical units (exclusive with dimensionless inputs)")
    g.add_argument("--omega-s-thz", type=float, help="omega_s/(2 pi) in THz")
    g.add_argument("--gap-nm", type=float, help="gap d in nm")
    g.add_argument("--v-mps", type=float, help="relative speed in m/s")
    g.add_argument("--temp-k", type=float, help="temperature in K")
    g.add_argument("--gamma-rad-s", type=float, help="collision rate gamma in rad/s")


def _add_output(p):
    p.add_argument("--out", default="-", help="output path ('-' for stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--no-meta", action="store_true", help="omit metadata header")


# -------------------------------------------------------------- commands


def cmd_threshold(args):
    phys = _physical(args)
    eta, gamma = args.eta, args.gamma
    if phys is not None:
        if eta is not None or gamma is not None:
            raise UsageError("physical and dimensionless inputs are mutually exclusive")
        eta = phys["eta"]
        gamma = phys["Gamma"] if args.gamma_rad_s is not None else None
    if (eta is None) == (gamma is None):
        raise UsageError("give exactly one of --gamma / --eta")
    if gamma is not None:
        eta_c = critical_eta(gamma)
        if eta_c is None:
            columns = ("gamma", "eta_c", "beta_star", "eta_c_weak", "status")
            rows = [(gamma, None, None, None, "always stable")]
            print(f"Gamma = {gamma!r} >= 1/sqrt(2): always stable", file=sys.stderr)
        else:
            bp = critical_gamma(eta_c) if eta_c > 0 else None
            weak = 2.0 / math.log(1.0 / (2.0 * gamma)) if 0 < gamma < 0.5 else None
            columns = ("gamma", "eta_c", "beta_star", "eta_c_weak", "status")
            rows = [(gamma, eta_c, bp.beta_star if bp else None, weak, "ok")]
            if phys is not None:
                cfg = phys["cfg"]
                columns += ("v_c_mps",)
                rows = [rows[0] + (eta_c * cfg.omega_s * cfg.d,)]
    else:
        bp = critical_gamma(eta)
        columns = ("eta", "gamma_c", "beta_star", "gamma_c_weak", "status")
        rows = [(eta, bp.gamma_c, bp.beta_star, 0.5 * math.exp(-2.0 / eta), "ok")]
    _emit(args, render(columns, rows, _meta(args), args.format, not args.no_meta))
    return EXIT_OK


def cmd_diagram(args):
    if not (0 < args.eta_min < args.eta_max) or args.n < 2:
        raise UsageError("need 0 < eta-min < eta-max and n >= 2")
    rows = []
    for eta in np.geomspace(args.eta_min, args.eta_max, args.n):
        bp = critical_gamma(float(eta))
        rows.append((float(eta), bp.gamma_c, bp.beta_star))
    meta = _meta(args, eta_min=args.eta_min, eta_max=args.eta_max, n=args.n)
    _emit(args, render(("eta", "gamma_c", "beta_star"), rows, meta, args.format, not args.no_meta))
    return EXIT_OK


def _force_row(method, eta, gamma, eps, theta, tol):
    """Evaluate one (point, method) pair; returns (row, exit code)."""
    status, code = "ok", EXIT_OK
    value = err = None
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            if method == "exact":
                r = force_exact(eta, gamma, tol)
            elif method == "exact_thermal":
                r = force_exact_thermal(eta, gamma, theta, tol)
            elif method == "deep_stable":
                r = force_deep_stable(eta, gamma)
            elif method == "near_threshold":
                r = force_near_threshold(eta, gamma)
            elif method == "log_asymptote":
                r = force_log_asymptote(eta, eps)
            elif method == "thermal_asymptote":
                r = force_thermal_asymptote(eta, eps, theta)
            else:
                raise UsageError(f"unknown method {method!r}")
        value, err = r.value, r.err_estimate
    except InstabilityError:
        status, code = "unstable", EXIT_UNSTABLE
    except DomainError as exc:
        status = "domain_error"
        code = EXIT_UNSTABLE if gamma <= 0.5 * math.exp(-2.0 / eta) else EXIT_ARGS
        print(f"{method} at eta={eta!r}, gamma={gamma!r}: {exc}", file=sys.stderr)
    except ConvergenceError as exc:
        status, code = "nonconverged", EXIT_CONVERGENCE
        value, err = exc.value, exc.err
    row = (eta, gamma, eps, theta, method, value, err,
           abs(value) if value is not None else None, status)
    return row, code


def _force_table(eta, points, methods, theta, tol):
    rows, code = [], EXIT_OK
    for gamma, eps in points:
        for m in methods:
            row, c = _force_row(m, eta, gamma, eps, theta, tol)
            rows.append(row)
            code = max(code, c)
    return rows, code


def _parse_methods(text):
    methods = [m.strip() for m in text.split(",") if m.strip()]
    bad = [m for m in methods if m not in METHODS]
    if bad or not methods:
        raise UsageError(f"unknown methods {bad}; choose from {', '.join(METHODS)}")
    return methods


def cmd_force(args):
    phys = _physical(args)
    eta, theta = args.eta, args.theta
    gammas = list(args.gamma or [])
    if phys is not None:
        if args.eta is not None or args.gamma or args.theta:
            raise UsageError("physical and dimensionless inputs are mutually exclusive")
        if phys["eta"] is None:
            raise UsageError("physical mode needs --v-mps > 0")
        eta, theta = phys["eta"], phys["theta"]
        if args.gamma_rad_s is not None:
            gammas = [phys["Gamma"]]
    theta = theta or 0.0
    if eta is None or not eta > 0:
        raise UsageError("--eta must be positive")
    if bool(args.epsilon) == bool(gammas):
        raise UsageError("give exactly one of --epsilon / --gamma lists")
    gc = 0.5 * math.exp(-2.0 / eta)
    if args.epsilon:
        points = [(gamma_from_epsilon(e, eta), e) for e in args.epsilon]
    else:
        points = [(g, g / gc - 1.0) for g in gammas]
    methods = _parse_methods(args.methods)
    rows, code = _force_table(eta, points, methods, theta, args.tol)
    meta = _meta(args, eta=eta, theta=theta, tol=args.tol, methods=",".join(methods))
    if phys is not None:
        cfg = phys["cfg"]
        meta.update({"omega_s": _cell(cfg.omega_s), "d": _cell(cfg.d), "v": _cell(cfg.v),
                     "T": _cell(cfg.T), "F0_N_per_m2": _cell(force_scale(cfg))})
    _emit(args, render(FORCE_COLUMNS, rows, meta, args.format, not args.no_meta))
    return code


def cmd_dispersion(args):
    if args.n < 2:
        raise UsageError("n must be >= 2")
    eta, gamma = args.eta, args.gamma
    phys = _physical(args)
    if phys is not None:
        if phys["eta"] is None:
            raise UsageError("physical mode needs --v-mps > 0")
        eta, gamma = phys["eta"], phys["Gamma"]
    if eta is None or not eta > 0:
        raise UsageError("--eta must be positive")
    if gamma is None or gamma < 0:
        raise UsageError("--gamma must be non-negative")
    betas = np.linspace(args.beta_min, args.beta_max, args.n)
    x = 2.0 * betas / eta
    coupling = np.zeros_like(x) if args.decoupled else np.exp(-2.0 * np.hypot(x, args.ky))
    roots = roots_array(betas, coupling, gamma)
    names = ("a_plus", "a_minus", "b_plus", "b_minus")
    columns = ("beta",) + tuple(f"{p}_{n}" for n in names for p in ("re", "im"))
    rows = []
    for i, b in enumerate(betas):
        row = [float(b)]
        for j in range(4):
            row += [float(roots[j, i].real), float(roots[j, i].imag)]
        rows.append(tuple(row))
    meta = _meta(args, eta=eta, gamma=gamma, ky=args.ky, decoupled=args.decoupled)
    _emit(args, render(columns, rows, meta, args.format, not args.no_meta))
    return EXIT_OK


def fig3_summary(rows, eta):
    """Slope of the exact force against ln(1/eps) over eps in [3e-3, 3e-2]."""
    pts = [(math.log(1.0 / r[2]), r[5]) for r in rows
           if r[4] == "exact" and r[5] is not None and 3e-3 <= r[2] <= 3e-2 + 1e-15]
    if len(pts) < 3:
        return {"fit_points": len(pts)}
    fit = fit_log_slope(pts)
    analytic = -log_prefactor(eta)
    return {"fit_points": len(pts), "slope": fit.slope, "r2": fit.r2,
            "analytic_slope": analytic, "slope_ratio": fit.slope / analytic}


def cmd_sweep_fig3(args):
    eta = 0.5
    points = [(gamma_from_epsilon(e, eta), e) for e in FIG3_EPSILONS]
    rows, code = _force_table(eta, points, FIG3_METHODS, 0.0, args.tol)
    summary = fig3_summary(rows, eta)
    for key, val in summary.items():
        print(f"{key}: {val}", file=sys.stderr)
    meta = _meta(args, eta=eta, tol=args.tol, methods=",".join(FIG3_METHODS))
    _emit(args, render(FORCE_COLUMNS, rows, meta, args.format, not args.no_meta, summary))
    return code


# ---------------------------------------------------------------- parser


def build_parser():
    parser = argparse.ArgumentParser(prog="qfriction", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"qfriction {__version__}")
    parser.add_argument("--config", help="file of 'key = value' lines; flags override it")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("threshold", help="critical eta for a Gamma, or critical Gamma for an eta")
    p.add_argument("--gamma", type=float)
    p.add_argument("--eta", type=float)
    _add_physical(p)
    _add_output(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("diagram", help="stability boundary Gamma_c(eta)")
    p.add_argument("--eta-min", type=float, default=0.2)
    p.add_argument("--eta-max", type=float, default=1e3)
    p.add_argument("--n", type=int, default=60)
    _add_output(p)
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("force", help="friction force for a list of points and methods")
    p.add_argument("--eta", type=float)
    p.add_argument("--epsilon", type=float, nargs="+")
    p.add_argument("--gamma", type=float, nargs="+")
    p.add_argument("--methods", default="exact,near_threshold,log_asymptote")
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--tol", type=float, default=1e-3)
    _add_physical(p)
    _add_output(p)
    p.set_defaults(func=cmd_force)

    p = sub.add_parser("dispersion", help="complex mode frequencies versus beta")
    p.add_argument("--eta", type=float)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--beta-min", type=float, default=0.0)
    p.add_argument("--beta-max", type=float, default=2.0)
    p.add_argument("--ky", type=float, default=0.0)
    p.add_argument("--n", type=int, default=201)
    p.add_argument("--decoupled", action="store_true", help="isolated plates (d -> infinity)")
    _add_physical(p)
    _add_output(p)
    p.set_defaults(func=cmd_dispersion)

    p = sub.add_parser("sweep-fig3", help="canned near-threshold comparison at eta = 0.5")
    p.add_argument("--tol", type=float, default=1e-3)
    _add_output(p)
    p.set_defaults(func=cmd_sweep_fig3)
    return parser


def read_config(path):
    """Turn 'key = value' lines into argv tokens."""
    tokens = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"bad config line: {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        flag = "--" + key.replace("_", "-")
        if val.lower() in ("true", "yes", "on"):
            tokens.append(flag)
        elif val.lower() in ("false", "no", "off"):
            continue
        elif key == "methods":
            tokens += [flag, val]
        else:
            tokens += [flag] + val.replace(",", " ").split()
    return tokens


def _splice_config(argv):
    # config tokens go right after the subcommand so later flags win
    argv = list(argv)
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    path = argv[i + 1]
    del argv[i:i + 2]
    tokens = read_config(path)
    for j, tok in enumerate(argv):
        if not tok.startswith("-"):
            return argv[:j + 1] + tokens + argv[j + 1:]
    return argv + tokens


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    try:
        args = parser.parse_args(_splice_config(argv))
        return args.func(args)
    except (UsageError, InvalidConfigError, OSError) as exc:
        print(f"qfriction: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except InstabilityError as exc:
        print(f"qfriction: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except ConvergenceError as exc:
        print(f"qfriction: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    raise SystemExit(main())
