"""Acceptance criteria, each run at its stated tolerance and runtime budget.

Every test records one PASS/FAIL line; the lines are printed together at the
end of the pytest run (see conftest.py).
"""

import math
import time

import numpy as np
import pytest

from qfriction.dispersion import (
    TransverseWavevector,
    delta_determinant,
    growth_rate,
    instability_window,
    lossless_branches,
    lossy_roots,
)
from qfriction.friction import (
    force_deep_stable,
    force_exact,
    force_exact_thermal,
    force_near_threshold,
    log_prefactor,
    thermal_factor,
)
from qfriction.numerics import (
    find_root,
    fit_log_slope,
    integrate_1d,
    integrate_3d,
    maximize_1d,
)
from qfriction.params import PhysicalConfig, force_scale
from qfriction.stability import GAMMA_SAT, critical_eta, critical_gamma, gamma_from_epsilon, gamma_of_beta
from test_numerics import BATTERY, TOLS, _bump_case


def record(report, num, title, ok, detail, elapsed, budget):
    within = elapsed <= budget
    status = "PASS" if (ok and within) else "FAIL"
    line = f"{status}  [{num:2d}] {title}: {detail} ({elapsed:.1f} s, budget {budget:g} s)"
    report[num] = line
    print(line)
    return ok and within, line


def test_01_log_prefactor(report):
    t0 = time.perf_counter()
    coef = log_prefactor(1.0)
    rel = coef / 0.002 - 1
    ok = abs(rel) <= 0.05 and coef == pytest.approx(math.exp(-4) / (2 * math.pi * math.sqrt(2)), rel=1e-15)
    passed, line = record(report, 1, "log-law prefactor at eta=1", ok,
                  f"{coef:.4e} vs 0.002, rel {rel:+.3f} (need |rel| <= 0.05)",
                  time.perf_counter() - t0, 1)
    assert passed, line


def test_02_physical_estimate(report):
    t0 = time.perf_counter()
    f0 = force_scale(PhysicalConfig.from_thz_nm(1.5, 10.0))
    # N/m^2 == pN/um^2; check both the rounded 0.002 and the exact log-law coefficient
    est = 0.002 * f0
    est_exact = log_prefactor(1.0) * f0
    rel, rel_exact = est / 2.0 - 1, est_exact / 2.0 - 1
    ok = abs(rel) <= 0.03 and abs(rel_exact) <= 0.03 and f0 == pytest.approx(993.9, abs=0.05)
    passed, line = record(report, 2, "physical estimate at 1.5 THz, 10 nm", ok,
                  f"F0 {f0:.1f} N/m^2; 0.002 F0 = {est:.3f}, {log_prefactor(1.0):.3e} F0 = {est_exact:.3f} "
                  f"pN/um^2 vs 2.0, rel {rel:+.4f}, {rel_exact:+.4f} (need |rel| <= 0.03)",
                  time.perf_counter() - t0, 1)
    assert passed, line


def test_03_weak_dissipation_threshold(report):
    t0 = time.perf_counter()
    rels = []
    for G in (1e-4, 1e-3, 1e-2, 2e-2):
        rels.append(critical_eta(G) / (2 / math.log(1 / (2 * G))) - 1)
    ok = all(abs(r) <= 0.02 for r in rels)
    passed, line = record(report, 3, "critical_eta vs 2/ln(1/(2 Gamma))", ok,
                  "rel " + ", ".join(f"{r:+.2e}" for r in rels) + " (need <= 0.02)",
                  time.perf_counter() - t0, 5)
    assert passed, line


def test_04_diagram_saturation(report):
    t0 = time.perf_counter()
    critical_gamma.cache_clear()
    gc = critical_gamma(1e3).gamma_c
    gap = gc - GAMMA_SAT
    passed, line = record(report, 4, "critical_gamma(1e3) vs 1/sqrt(2)", abs(gap) <= 1e-3,
                  f"{gc:.6f}, diff {gap:+.2e} (need |diff| <= 1e-3)",
                  time.perf_counter() - t0, 5)
    assert passed, line


def test_05_strong_dissipation_scaling(report):
    t0 = time.perf_counter()
    deltas = np.geomspace(1e-3, 1e-2, 8)
    fit = fit_log_slope([(math.log(d), math.log(critical_eta((1 - d) * GAMMA_SAT))) for d in deltas])
    passed, line = record(report, 5, "eta_c ~ delta^(-3/2)", abs(fit.slope + 1.5) <= 0.15,
                  f"slope {fit.slope:.4f}, r2 {fit.r2:.6f} (need -1.5 +- 0.15)",
                  time.perf_counter() - t0, 30)
    assert passed, line


def test_06_deep_stable_closed_form(report):
    t0 = time.perf_counter()
    ratios = []
    for eta in (0.1, 0.2, 0.3):
        ratios.append(force_exact(eta, 0.1, tol=1e-4).value / force_deep_stable(eta, 0.1).value)
    ok = all(abs(r - 1) <= 0.05 for r in ratios)
    passed, line = record(report, 6, "force_exact / deep-stable closed form at Gamma=0.1", ok,
                  "ratios " + ", ".join(f"{r:.4f}" for r in ratios) + " for eta 0.1, 0.2, 0.3 (need 1 +- 0.05)",
                  time.perf_counter() - t0, 180)
    assert passed, line


def test_07_cubic_velocity_law(report):
    t0 = time.perf_counter()
    etas = np.geomspace(0.05, 0.2, 7)
    fit = fit_log_slope([(math.log(e), math.log(abs(force_exact(float(e), 0.1).value))) for e in etas])
    passed, line = record(report, 7, "slope of ln|F| vs ln eta on [0.05, 0.2]", abs(fit.slope - 3) <= 0.1,
                  f"slope {fit.slope:.4f}, r2 {fit.r2:.5f} (need 3.0 +- 0.1)",
                  time.perf_counter() - t0, 300)
    assert passed, line


def test_08_near_threshold_agreement(report):
    t0 = time.perf_counter()
    eta = 0.5
    eps = (0.003, 0.01, 0.03, 0.1)
    exact, gaps = [], []
    for e in eps:
        G = gamma_from_epsilon(e, eta)
        ex = force_exact(eta, G).value
        exact.append(ex)
        gaps.append(force_near_threshold(eta, G).value / ex - 1)
    decreasing = all(abs(a) > abs(b) for a, b in zip(exact, exact[1:]))
    ok = decreasing and all(abs(g) <= 0.25 for g in gaps)
    passed, line = record(report, 8, "near_threshold vs exact at eta=0.5", ok,
                  "gaps " + ", ".join(f"{g:+.3f}" for g in gaps) + " for eps " + ", ".join(map(str, eps))
                  + f" (need <= 0.25); |F| decreasing in eps: {decreasing}",
                  time.perf_counter() - t0, 600)
    assert passed, line


def test_09_log_divergence(report):
    t0 = time.perf_counter()
    eta = 0.5
    eps = np.geomspace(3e-3, 3e-2, 6)
    fit = fit_log_slope([(math.log(1 / e), force_exact(eta, gamma_from_epsilon(float(e), eta)).value)
                         for e in eps])
    analytic = -2.136e-4
    assert analytic == pytest.approx(-log_prefactor(eta), rel=1e-3)
    ratio = fit.slope / analytic
    ok = abs(ratio - 1) <= 0.3 and fit.r2 >= 0.98
    passed, line = record(report, 9, "slope of F vs ln(1/eps) at eta=0.5", ok,
                  f"slope {fit.slope:.4e}, ratio {ratio:.3f}, r2 {fit.r2:.4f} (need ratio 1 +- 0.3, r2 >= 0.98)",
                  time.perf_counter() - t0, 600)
    assert passed, line


def test_10_thermal_factor(report):
    t0 = time.perf_counter()
    eta = 0.5
    G = gamma_from_epsilon(0.03, eta)
    base = force_exact(eta, G).value
    parts, ok = [], True
    for theta in (0.5, 2.0, 5.0):
        ratio = force_exact_thermal(eta, G, theta).value / base
        rel = ratio / thermal_factor(theta) - 1
        ok &= abs(rel) <= 0.1
        parts.append(f"theta {theta:g}: {ratio:.3f} vs coth {thermal_factor(theta):.3f} ({rel:+.3f})")
        if theta == 5.0:
            rel_hi = ratio / (2 * theta) - 1
            ok &= abs(rel_hi) <= 0.1
            parts.append(f"vs 2 theta {rel_hi:+.3f}")
    passed, line = record(report, 10, "thermal/zero-T ratio vs coth(1/(2 theta))", ok,
                  "; ".join(parts) + " (need <= 0.1)", time.perf_counter() - t0, 900)
    assert passed, line


def test_11_dispersion_consistency(report):
    t0 = time.perf_counter()
    eta = 0.5
    worst_rel = worst_res = 0.0
    for beta in np.linspace(-3, 3, 50):
        for y in np.linspace(-5, 5, 50):
            k = TransverseWavevector.from_beta(float(beta), eta, float(y))
            wa, wb = lossless_branches(k, eta)
            ref = np.array([wa, -wa, wb, -wb])
            r = lossy_roots(k, eta, 0.0).as_array()
            worst_rel = max(worst_rel, float(np.max(np.abs(r - ref) / np.maximum(np.abs(ref), 1e-300))))
            for G in (0.0, 0.01, 0.3, 0.7):
                for w in lossy_roots(k, eta, G).as_array():
                    worst_res = max(worst_res, abs(delta_determinant(w, k, eta, G)))
    mismatches = inside = 0
    for y in np.linspace(0.0, 3.0, 50):
        lo, hi = instability_window(float(y), eta)
        for beta in np.linspace(0.985, 1.015, 50):
            k = TransverseWavevector.from_beta(float(beta), eta, float(y))
            flag = lo < abs(k.beta(eta)) < hi
            inside += flag
            mismatches += (growth_rate(k, eta) > 0) != flag
    ok = worst_rel <= 1e-10 and worst_res < 1e-8 and mismatches == 0 and inside > 0
    passed, line = record(report, 11, "dispersion consistency on 50x50 grids", ok,
                  f"Gamma=0 rel diff {worst_rel:.1e}, max |Delta(root)| {worst_res:.1e}, "
                  f"window mismatches {mismatches} of 2500 ({inside} inside)",
                  time.perf_counter() - t0, 10)
    assert passed, line


def test_12_numerics_battery(report):
    t0 = time.perf_counter()
    failures = []
    honest = []

    def check(name, value, exact, tol, err=None):
        if abs(value - exact) > tol:
            failures.append(name)
        if err is not None:
            honest.append(abs(value - exact) <= 3 * err)

    for name, f, a, b, exact in BATTERY:
        for tol in TOLS:
            r = integrate_1d(f, a, b, tol_rel=tol)
            check(f"{name}@{tol:g}", r.value, exact, max(3 * tol * abs(exact), 1e-14 * abs(exact)), r.err)
    r = integrate_1d(lambda x: np.ones_like(x), 0.0, 1.0)
    check("constant", r.value, 1.0, 0.0, r.err)
    r = integrate_1d(lambda x: np.exp(-2 * x), 0.0, 20.0, tol_rel=1e-13)
    check("exp(-2x)", r.value, -math.expm1(-40) / 2, 1e-12, r.err)
    ex = 2 * math.asinh(1 / (2 * math.sqrt(2e-4)))
    r = integrate_1d(lambda t: 1 / np.sqrt(2e-4 + t * t), -0.5, 0.5, tol_rel=1e-10)
    check("asinh", r.value, ex, 1e-10 * ex, r.err)

    sig = (0.3, 1.0, 2.5)
    r = integrate_3d(lambda w, x, y: np.exp(-0.5 * ((w / sig[0]) ** 2 + (x / sig[1]) ** 2 + (y / sig[2]) ** 2)),
                     tuple((-8 * s, 8 * s) for s in sig), tol_rel=1e-10)
    ex = float(np.prod([s * math.sqrt(2 * math.pi) * math.erf(8 / math.sqrt(2)) for s in sig]))
    check("gaussian3d", r.value, ex, 1e-8 * ex, r.err)
    r = integrate_3d(lambda w, x, y: np.broadcast_to(x ** 4 * np.exp(-2 * np.hypot(x, y)),
                                                     np.broadcast_shapes(np.shape(w), np.shape(x))),
                     ((0.0, 1.0), (0.0, 30.0), (0.0, 30.0)), tol_rel=1e-9)
    check("x4exp", r.value, 45 * math.pi / 128, 1e-8, r.err)
    f, ex, hint = _bump_case(2e-4)
    r = integrate_3d(f, ((0, 1), (0, 1), (0, 1)), hint=hint, tol_rel=1e-3)
    check("bump", r.value, ex, 1e-3 * ex, r.err)
    if r.evals >= 1e7:
        failures.append(f"bump evals {r.evals}")

    check("sqrt2", find_root(lambda x: x * x - 2, 1.0, 2.0, tol=1e-12), math.sqrt(2), 1e-12)
    calls = []
    root = find_root(lambda x: calls.append(x) or 3 * x - 1, -2.0, 5.0, tol=1e-12)
    check("linear", root, 1 / 3, 1e-12)
    if len(calls) - 2 > 2:
        failures.append("linear root steps")
    root = find_root(lambda e: critical_gamma(e).gamma_c - 0.05, 0.3, 3.0, tol=1e-10)
    check("threshold root", root, 2 / math.log(10), 0.02 * 0.8686)

    m = maximize_1d(lambda x: -(x - 0.3) ** 2, -1.0, 2.0, tol=1e-10)
    check("parabola", m.x, 0.3, 1e-8)
    m = maximize_1d(lambda b: gamma_of_beta(b, 0.5), 0.5, 1.5, tol=1e-12,
                    grid=np.concatenate([np.linspace(0.5, 1.5, 301), 1 + 0.01 * np.linspace(-1, 1, 41)]))
    check("Gamma(beta) argmax", m.x, 1.0, 1e-3)
    check("Gamma(beta) max", m.fx, 0.5 * math.exp(-4), 0.002 * 0.5 * math.exp(-4))

    fit = fit_log_slope([(s, 2 * s + 1) for s in (0.0, 1.0, 2.5, 4.0)])
    check("line slope", fit.slope, 2.0, 1e-14)
    check("line r2", fit.r2, 1.0, 1e-14)
    fit = fit_log_slope([(math.log(1 / e), -log_prefactor(0.5) * math.log(1 / e)) for e in (3e-3, 1e-2, 3e-2)])
    check("log-law slope", fit.slope, -2.136e-4, 1e-3 * 2.136e-4)
    fit = fit_log_slope([(math.log(e), math.log(abs(force_deep_stable(e, 0.1).value))) for e in (0.05, 0.1, 0.2)])
    check("cubic slope", fit.slope, 3.0, 1e-12)

    honesty = sum(honest) / len(honest)
    ok = not failures and honesty >= 0.99
    passed, line = record(report, 12, "numerics oracle battery", ok,
                  f"{len(failures)} failures {failures[:5]}, error honesty {honesty:.3f} over {len(honest)} cases",
                  time.perf_counter() - t0, 60)
    assert passed, line
