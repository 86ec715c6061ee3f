"""Friction force per unit area between the sheared plates.

All forces are in units of F_0 = hbar omega_s / d^3 and are negative (drag).
Wavevectors are x = k_x d, y = k_y d; frequencies w = omega/omega_s with
Doppler-shifted frequencies w± = w ± eta x/2 seen by the two plates.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .dispersion import roots_array
from .errors import ConvergenceError, DomainError, InstabilityError, PoleError
from .numerics import SingularityHint, graded_points, integrate_1d, integrate_3d
from .stability import critical_gamma

METHODS = ("exact", "exact_thermal", "deep_stable", "near_threshold",
           "log_asymptote", "thermal_asymptote")

DEEP_STABLE_COEFF = 15.0 / (64.0 * math.pi ** 2)
LOG_COEFF = 1.0 / (2.0 * math.pi * math.sqrt(2.0))


@dataclass(frozen=True)
class ForceResult:
    value: float
    method: str
    err_estimate: float = 0.0
    meta: dict = field(default_factory=dict)


def reflection(w, Gamma):
    """Quasi-static reflection coefficient 1/(w(w + 2i Gamma) - 1)."""
    den = w * (w + 2j * Gamma) - 1.0
    if np.any(den == 0):
        raise PoleError(f"reflection coefficient has a pole at w={w!r}, Gamma={Gamma!r}")
    return 1.0 / den


def integrand_exact(w, x, y, eta, Gamma):
    """Zero-temperature integrand of F/F_0 over (w, x, y).

    (1/(2 pi^3)) x Im R- Im R+ exp(-2m) / |1 - R- R+ exp(-2m)|^2 with
    m = sqrt(x^2 + y^2); integrate w over (-eta x/2, eta x/2), x over
    (0, inf) and y over the real line.
    """
    a = 0.5 * eta * np.asarray(x)
    rp = reflection(w + a, Gamma)
    rm = reflection(w - a, Gamma)
    e2 = np.exp(-2.0 * np.hypot(x, y))
    return (x / (2.0 * math.pi ** 3)) * rm.imag * rp.imag * e2 / np.abs(1.0 - rm * rp * e2) ** 2


def _phi(u, theta):
    # u coth(u / 2 theta), smooth and even; |u| at theta = 0
    if theta == 0:
        return np.abs(u)
    z = u / (2.0 * theta)
    small = np.abs(u) < 1e-8
    with np.errstate(divide="ignore", invalid="ignore"):
        out = u / np.tanh(z)
    return np.where(small, 2.0 * theta, out)


def smoothing_factor(wp, wm, theta):
    """(1/2)[coth(w+/2 theta) - coth(w-/2 theta)]; the T = 0 window at theta = 0."""
    if theta == 0:
        return 0.5 * (np.sign(wp) - np.sign(wm))
    return 0.5 * (1.0 / np.tanh(wp / (2.0 * theta)) - 1.0 / np.tanh(wm / (2.0 * theta)))


def integrand_thermal(w, x, y, eta, Gamma, theta):
    """Finite-temperature integrand: :func:`integrand_exact` times the smoothing factor.

    Integrate w over the whole real line.  Points with w± = 0 use the
    analytic limit of coth(w/2 theta) Im R(w).
    """
    return _kernel(w, x, y, eta, Gamma, theta)


def _kernel(w, x, y, eta, Gamma, theta):
    # Im R± = -2 Gamma w± / |D±|^2 turns the integrand into
    # (x/2pi^3) e^{-2m} 4 Gamma^2 N(w) / |Delta|^2 with
    # N = (1/2)[phi(w+) w- - phi(w-) w+], phi(u) = u coth(u/2 theta)
    x = np.asarray(x, dtype=float)
    a = 0.5 * eta * x
    wp = w + a
    wm = w - a
    dp = wp * (wp + 2j * Gamma) - 1.0
    dm = wm * (wm + 2j * Gamma) - 1.0
    e2 = np.exp(-2.0 * np.hypot(x, y))
    delta = dp * dm - e2
    num = 0.5 * (_phi(wp, theta) * wm - _phi(wm, theta) * wp)
    mag2 = delta.real ** 2 + delta.imag ** 2
    return (x / (2.0 * math.pi ** 3)) * e2 * 4.0 * Gamma * Gamma * num / mag2


def _domain(eta):
    x_max = 2.0 / eta + 15.0
    y_max = math.sqrt(x_max ** 2 - (2.0 / eta) ** 2)
    return x_max, y_max


def _hint(eta, Gamma, x_max, y_max):
    """Resonance location (0, k_0 d, 0) and its scales in (w, x, y)."""
    gc = critical_gamma(eta).gamma_c
    eps = Gamma / gc - 1.0
    k0d = 2.0 / eta
    f0 = math.exp(-k0d)
    half_window = 0.5 * k0d * f0
    w_width = min(max(Gamma - gc, 1e-14), 1.0)
    x_width = min(half_window * math.sqrt(2.0 * min(eps, 1.0)), 0.25 * x_max)
    y_width = min(math.sqrt(k0d * min(eps, 1.0)), 0.25 * y_max)
    hint = SingularityHint((0.0, k0d, 0.0), (w_width, max(x_width, 1e-14), max(y_width, 1e-14)))
    x_points = [k0d - half_window, k0d + half_window]
    return hint, x_points, eps


def _check_stable(eta, Gamma):
    if not eta > 0:
        raise DomainError("eta must be positive")
    gc = critical_gamma(eta).gamma_c
    if not Gamma > gc:
        raise InstabilityError(eta, Gamma, gc)


def _integrate_force(eta, Gamma, theta, tol, frame, w_max=None):
    _check_stable(eta, Gamma)
    x_max, y_max = _domain(eta)
    hint, x_points, eps = _hint(eta, Gamma, x_max, y_max)
    if frame == "symmetric":
        shift = 0.0
    elif frame == "rest":
        shift = 1.0  # w' = w + eta x/2: frame co-moving with the lower plate
    else:
        raise ValueError(f"unknown frame {frame!r}")

    def poles(xs, y):
        r = roots_array(0.5 * eta * xs, np.exp(-2.0 * np.hypot(xs, y)), Gamma)
        centers = r.real.T + shift * 0.5 * eta * xs[:, None]
        return centers, np.abs(r.imag.T)

    def f(w, x, y):
        return _kernel(w - shift * 0.5 * eta * x, x, y, eta, Gamma, theta)

    if frame == "symmetric":
        # integrand is even in w: fold onto w >= 0
        w_lo = 0.0
        w_hi = (lambda xs, y: 0.5 * eta * xs) if w_max is None else w_max
        fold = 2.0
    else:
        if w_max is None:
            w_lo, w_hi = 0.0, (lambda xs, y: eta * xs)
        else:
            w_lo = (lambda xs, y: 0.5 * eta * xs - w_max)
            w_hi = (lambda xs, y: 0.5 * eta * xs + w_max)
        fold = 1.0
    hint_c = hint
    if shift:
        # resonance sits at w' = eta x/2 in the rest frame; grading comes from the poles
        hint_c = SingularityHint((1.0, hint.center[1], 0.0), hint.widths)
    res = integrate_3d(f, ((w_lo, w_hi), (0.0, x_max), (0.0, y_max)), hint=hint_c,
                       tol_rel=tol, points=((), x_points, ()), inner_poles=poles)
    # y folded onto [0, y_max]
    total = 2.0 * fold
    return total * res.value, total * res.err, res.evals, eps


def force_exact(eta: float, Gamma: float, tol: float = 1e-3, frame: str = "symmetric") -> ForceResult:
    """Full zero-temperature friction integral by nested adaptive cubature.

    ``frame="rest"`` integrates in the frame of one plate instead of the
    symmetric frame; both give the same force.

    Raises InstabilityError when no steady state exists and ConvergenceError
    when the tolerance cannot be met.
    """
    value, err, evals, eps = _integrate_force(eta, Gamma, 0.0, tol, frame)
    meta = {"eta": eta, "Gamma": Gamma, "theta": 0.0,
            "epsilon": Gamma / (0.5 * math.exp(-2.0 / eta)) - 1.0, "evals": evals}
    return ForceResult(value, "exact", err, meta)


def force_exact_thermal(eta: float, Gamma: float, theta: float, tol: float = 1e-3,
                        frame: str = "symmetric") -> ForceResult:
    """Friction integral with the thermal smoothing factor at reduced temperature theta."""
    if theta < 0:
        raise DomainError("theta must be non-negative")
    x_max, _ = _domain(eta)
    w_max = 0.5 * eta * x_max + 40.0 * theta + 10.0
    value, err, evals, eps = _integrate_force(eta, Gamma, theta, tol, frame, w_max=w_max)
    meta = {"eta": eta, "Gamma": Gamma, "theta": theta,
            "epsilon": Gamma / (0.5 * math.exp(-2.0 / eta)) - 1.0, "evals": evals}
    return ForceResult(value, "exact_thermal", err, meta)


def force_deep_stable(eta: float, Gamma: float) -> ForceResult:
    """-(15/(64 pi^2)) eta^3 Gamma^2, valid for Gamma_c << Gamma << 1."""
    gc = 0.5 * math.exp(-2.0 / eta) if eta > 0 else 0.0
    if not (10.0 * gc < Gamma < 0.3):
        warnings.warn(f"Gamma={Gamma} is outside the deep-stable range (10 Gamma_c, 0.3)",
                      stacklevel=2)
    value = -DEEP_STABLE_COEFF * eta ** 3 * Gamma ** 2
    return ForceResult(value, "deep_stable", 0.0, {"eta": eta, "Gamma": Gamma})


def force_near_threshold(eta: float, Gamma: float, tol: float = 1e-8) -> ForceResult:
    """Near-threshold reduction to a single k_y integral.

    -(1/(2 pi^2 eta^2)) * integral of arcsin(u)/sqrt(1 - u^2) f^2 dY with
    f = exp(-sqrt((2/eta)^2 + Y^2)) and u = f/(2 Gamma).
    """
    k0d = 2.0 / eta
    gc = 0.5 * math.exp(-k0d)
    if not Gamma > gc:
        raise DomainError(f"near-threshold formula needs Gamma > {gc!r}, got {Gamma!r}")

    eps = Gamma / gc - 1.0

    def integrand(Y):
        r = np.hypot(k0d, Y)
        f = np.exp(-r)
        # u = exp(-delta)/(1 + eps) with delta = r - k0d; 1 - u without cancellation
        delta = Y * Y / (r + k0d)
        u = np.exp(-delta) / (1.0 + eps)
        one_minus_u = (eps - np.expm1(-delta)) / (1.0 + eps)
        return np.arcsin(u) / np.sqrt(one_minus_u * (1.0 + u)) * f * f

    # support: up to where f^2 has dropped by 1e-16 relative to its peak
    y_star = math.sqrt((k0d + 0.5 * math.log(1e16)) ** 2 - k0d ** 2)
    width = math.sqrt(2.0 * k0d * min(max(eps, 1e-300), 1.0))
    res = integrate_1d(integrand, 0.0, y_star, tol_rel=tol,
                       points=graded_points(0.0, max(width, 1e-12), 0.0, y_star))
    scale = -1.0 / (2.0 * math.pi ** 2 * eta ** 2)
    meta = {"eta": eta, "Gamma": Gamma, "epsilon": eps}
    return ForceResult(2.0 * scale * res.value, "near_threshold", 2.0 * abs(scale) * res.err, meta)


def force_log_asymptote(eta: float, epsilon: float) -> ForceResult:
    """-(1/(2 pi sqrt 2)) eta^(-5/2) exp(-4/eta) ln(1/epsilon)."""
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    # + 0.0 turns the -0.0 at epsilon = 1 into 0.0
    value = -LOG_COEFF * eta ** -2.5 * math.exp(-4.0 / eta) * math.log(1.0 / epsilon) + 0.0
    return ForceResult(value, "log_asymptote", 0.0, {"eta": eta, "epsilon": epsilon})


def thermal_factor(theta: float) -> float:
    """coth(1/(2 theta)); 1 at theta = 0 and about 2 theta for theta >> 1."""
    if theta < 0:
        raise DomainError("theta must be non-negative")
    if theta == 0:
        return 1.0
    return 1.0 / math.tanh(0.5 / theta)


def force_thermal_asymptote(eta: float, epsilon: float, theta: float) -> ForceResult:
    base = force_log_asymptote(eta, epsilon)
    value = base.value * thermal_factor(theta)
    return ForceResult(value, "thermal_asymptote", 0.0,
                       {"eta": eta, "epsilon": epsilon, "theta": theta})


def log_prefactor(eta: float) -> float:
    """Magnitude of the slope of F/F_0 against ln(1/epsilon)."""
    return LOG_COEFF * eta ** -2.5 * math.exp(-4.0 / eta)
