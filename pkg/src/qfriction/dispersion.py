"""Coupled surface-plasmon modes of two plates in relative shear motion.

Frequencies are in units of omega_s and wavevectors in units of 1/d.  The
shear couples the Doppler-shifted plasmons of the two plates through
exp(-2|k|d); beta = k_x/k_0 = x*eta/2 measures the Doppler shift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TransverseWavevector:
    x: float  # k_x d
    y: float = 0.0  # k_y d

    @property
    def magnitude(self) -> float:
        return math.hypot(self.x, self.y)

    def beta(self, eta: float) -> float:
        return self.x * eta / 2.0

    @classmethod
    def from_beta(cls, beta: float, eta: float, y: float = 0.0) -> "TransverseWavevector":
        return cls(2.0 * beta / eta, y)


@dataclass(frozen=True)
class ModeRoots:
    """The four complex mode frequencies, labelled by their lossless ancestors."""

    omega_a_plus: complex
    omega_a_minus: complex
    omega_b_plus: complex
    omega_b_minus: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.omega_a_plus, self.omega_a_minus,
                         self.omega_b_plus, self.omega_b_minus])


def _csqrt(z):
    return np.sqrt(np.asarray(z, dtype=complex))


def roots_array(beta, coupling, Gamma):
    """All four roots of the mode determinant, vectorised.

    ``coupling`` is exp(-2|k|d).  Returns an array of shape (4, ...) ordered
    (a+, a-, b+, b-): w = -i Gamma ± sqrt(1 + beta^2 - Gamma^2 ± sqrt(coupling
    + 4 beta^2 (1 - Gamma^2))) with principal square roots.
    """
    beta = np.asarray(beta, dtype=float)
    g2 = Gamma * Gamma
    inner = _csqrt(coupling + 4.0 * beta * beta * (1.0 - g2))
    base = 1.0 + beta * beta - g2
    sa = _csqrt(base + inner)
    sb = _csqrt(base - inner)
    shift = -1j * Gamma
    return np.stack([shift + sa, shift - sa, shift + sb, shift - sb])


def lossless_branches(k: TransverseWavevector, eta: float):
    """Principal lossless roots (omega_a0, omega_b0); the others are their negatives.

    omega_b0 is purely imaginary inside the instability window.
    """
    beta = k.beta(eta)
    coupling = math.exp(-2.0 * k.magnitude)
    inner = math.sqrt(coupling + 4.0 * beta * beta)
    wa = complex(np.sqrt(complex(1.0 + beta * beta + inner)))
    wb = complex(np.sqrt(complex(1.0 + beta * beta - inner)))
    return wa, wb


def _window_coupling(y, eta):
    # exp(-|k|d) evaluated at k_x = k_0
    return np.exp(-np.hypot(2.0 / eta, y))


def instability_window(y: float, eta: float):
    """(beta_min, beta_max) of the lossless instability window at k_y d = y."""
    f = float(_window_coupling(y, eta))
    return 1.0 - 0.5 * f, 1.0 + 0.5 * f


def growth_rate(k: TransverseWavevector, eta: float) -> float:
    """Lossless growth rate in units of omega_s; zero outside the window.

    The coupling exp(-|k|d) is taken at k_x = k_0, the same narrow-window
    approximation that defines :func:`instability_window`, so the two agree
    on where the rate is positive.
    """
    f = float(_window_coupling(k.y, eta))
    detune = (2.0 - eta * abs(k.x)) / f
    rad = 1.0 - detune * detune
    if rad <= 0.0:
        return 0.0
    return 0.5 * f * math.sqrt(rad)


def lossy_roots(k: TransverseWavevector, eta: float, Gamma: float) -> ModeRoots:
    beta = k.beta(eta)
    r = roots_array(beta, math.exp(-2.0 * k.magnitude), Gamma)
    return ModeRoots(*(complex(v) for v in r))


def unstable_root(beta: float, eta: float, Gamma: float) -> complex:
    """The potentially unstable root at k_y = 0.

    i [-Gamma + sqrt(sqrt(exp(-4|beta|/eta) + 4 beta^2 (1 - Gamma^2))
    - (1 + beta^2 - Gamma^2))]; its imaginary part changes sign on the
    stability boundary.
    """
    g2 = Gamma * Gamma
    inner = np.sqrt(complex(math.exp(-4.0 * abs(beta) / eta) + 4.0 * beta * beta * (1.0 - g2)))
    return complex(1j * (-Gamma + np.sqrt(inner - (1.0 + beta * beta - g2))))


def delta_array(w, x, y, eta, Gamma):
    """Vectorised mode determinant Delta(w; x, y)."""
    a = 0.5 * eta * x
    wp = w + a
    wm = w - a
    dp = wp * (wp + 2j * Gamma) - 1.0
    dm = wm * (wm + 2j * Gamma) - 1.0
    return dp * dm - np.exp(-2.0 * np.hypot(x, y))


def delta_determinant(w: complex, k: TransverseWavevector, eta: float, Gamma: float) -> complex:
    """(w+(w+ + 2i Gamma) - 1)(w-(w- + 2i Gamma) - 1) - exp(-2|k|d), w± = w ± eta x/2."""
    return complex(delta_array(w, k.x, k.y, eta, Gamma))
