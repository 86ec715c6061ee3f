"""Stability boundary of the sheared plates in the (eta, Gamma) plane.

The k_y = 0 unstable root stays in the lower half plane for every beta iff
Gamma exceeds

    Gamma(beta) = sqrt((exp(-4|beta|/eta) - (1 - beta^2)^2) / (4 beta^2)),

so the critical dissipation is the supremum of Gamma(beta) over beta > 0.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import DomainError
from .numerics import find_root, maximize_1d

GAMMA_SAT = 1.0 / math.sqrt(2.0)

_BETA_MAX = 3.0


@dataclass(frozen=True)
class BoundaryPoint:
    eta: float
    gamma_c: float
    beta_star: float


def _radicand(beta: float, eta: float) -> float:
    b2 = beta * beta
    if b2 < 0.5:
        # both terms are close to 1 here; subtract the 1 analytically
        return math.expm1(-4.0 * abs(beta) / eta) + 2.0 * b2 - b2 * b2
    return math.exp(-4.0 * abs(beta) / eta) - (1.0 - b2) ** 2


def gamma_of_beta(beta: float, eta: float) -> Optional[float]:
    """Smallest Gamma that keeps wavenumber ratio ``beta`` stable.

    None when no Gamma >= 0 can destabilise that beta.
    """
    if beta == 0:
        raise DomainError("gamma_of_beta is singular at beta = 0")
    if eta <= 0:
        raise DomainError("eta must be positive")
    rad = _radicand(beta, eta)
    if rad < 0:
        return None
    return math.sqrt(rad / (4.0 * beta * beta))


def _scan_grid(eta: float) -> np.ndarray:
    # 300 mixed log/linear samples on (0, 3] plus a fine comb across the
    # lossless window around beta = 1, which is far narrower than the grid
    # spacing when eta is small
    log_part = np.geomspace(1e-6, _BETA_MAX, 150)
    lin_part = np.linspace(_BETA_MAX / 150, _BETA_MAX, 150)
    half = 0.5 * math.exp(-2.0 / eta)
    comb = 1.0 + half * np.linspace(-1.0, 1.0, 41)
    return np.unique(np.concatenate([log_part, lin_part, comb, [1.0]]))


@lru_cache(maxsize=4096)
def critical_gamma(eta: float) -> BoundaryPoint:
    """Critical reduced dissipation Gamma_c(eta) and the maximising beta."""
    if not eta > 0:
        raise DomainError("eta must be positive")
    grid = _scan_grid(eta)
    span = np.diff(grid).min()
    res = maximize_1d(lambda b: gamma_of_beta(b, eta), float(grid[0]), float(grid[-1]),
                      tol=min(1e-12, 1e-3 * span), grid=grid)
    if not math.isfinite(res.fx):
        # window narrower than double resolution around beta = 1
        return BoundaryPoint(eta, 0.5 * math.exp(-2.0 / eta), 1.0)
    return BoundaryPoint(eta, res.fx, res.x)


def is_stable(eta: float, Gamma: float) -> bool:
    return Gamma > critical_gamma(eta).gamma_c


def critical_eta(Gamma: float, rtol: float = 1e-8) -> Optional[float]:
    """Critical reduced velocity for dissipation ``Gamma``.

    Returns None for Gamma >= 1/sqrt(2) (stable at every velocity) and 0.0
    for Gamma = 0 (unstable at any velocity).
    """
    if Gamma < 0:
        raise DomainError("Gamma must be non-negative")
    if Gamma == 0:
        return 0.0
    if Gamma >= GAMMA_SAT:
        return None

    def g(log_eta):
        return critical_gamma(math.exp(log_eta)).gamma_c - Gamma

    # weak-dissipation estimate as a starting bracket
    guess = 2.0 / math.log(1.0 / (2.0 * Gamma)) if Gamma < 0.5 else 1.0
    lo = hi = math.log(guess)
    while g(lo) > 0:
        lo -= 1.0
    while g(hi) < 0:
        hi += 1.0
        if hi > 80:
            return None
    return math.exp(find_root(g, lo, hi, tol=rtol))


def epsilon_of(Gamma: float, eta: float) -> float:
    """Gamma/Gamma_c - 1 with the weak-dissipation threshold (1/2) exp(-2/eta)."""
    if eta <= 0:
        raise DomainError("eta must be positive")
    if math.exp(-4.0 / eta) >= 0.1:
        warnings.warn(f"eta={eta} is outside the weak-dissipation regime", stacklevel=2)
    return Gamma / (0.5 * math.exp(-2.0 / eta)) - 1.0


def gamma_from_epsilon(epsilon: float, eta: float) -> float:
    return 0.5 * math.exp(-2.0 / eta) * (1.0 + epsilon)
