"""Physical inputs, their reduction to (eta, Gamma, theta), and the force scale."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidConfigError

HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J / K


@dataclass(frozen=True)
class PhysicalConfig:
    """Dimensionful plate parameters (SI units).

    omega_s is the single-plate surface-plasmon frequency in rad/s, gamma the
    collision rate in rad/s, d the gap in m, v the relative speed in m/s and
    T the temperature in K.
    """

    omega_s: float
    gamma: float = 0.0
    d: float = 10e-9
    v: float = 0.0
    T: float = 0.0

    def __post_init__(self):
        if not (self.omega_s > 0 and math.isfinite(self.omega_s)):
            raise InvalidConfigError(f"omega_s must be positive, got {self.omega_s!r}")
        if not (self.d > 0 and math.isfinite(self.d)):
            raise InvalidConfigError(f"d must be positive, got {self.d!r}")
        for name in ("gamma", "v", "T"):
            val = getattr(self, name)
            if not (val >= 0 and math.isfinite(val)):
                raise InvalidConfigError(f"{name} must be non-negative, got {val!r}")

    @classmethod
    def from_thz_nm(cls, f_s_thz, gap_nm, v=0.0, T=0.0, gamma=0.0):
        """Build from the ordinary plasmon frequency omega_s/(2 pi) in THz and gap in nm."""
        return cls(omega_s=2 * math.pi * f_s_thz * 1e12, gamma=gamma, d=gap_nm * 1e-9, v=v, T=T)


@dataclass(frozen=True)
class Dimensionless:
    """Reduced velocity, dissipation and temperature."""

    eta: float
    Gamma: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if not (self.eta > 0 and math.isfinite(self.eta)):
            raise InvalidConfigError(f"eta must be positive, got {self.eta!r}")
        if not (self.Gamma >= 0 and math.isfinite(self.Gamma)):
            raise InvalidConfigError(f"Gamma must be non-negative, got {self.Gamma!r}")
        if not (self.theta >= 0 and math.isfinite(self.theta)):
            raise InvalidConfigError(f"theta must be non-negative, got {self.theta!r}")

    @property
    def k0_d(self) -> float:
        """Crossing wavenumber k_0 = 2 omega_s / v in units of 1/d."""
        return 2.0 / self.eta

    @property
    def gamma_c_weak(self) -> float:
        """Weak-dissipation threshold (1/2) exp(-2/eta)."""
        return 0.5 * math.exp(-2.0 / self.eta)

    @property
    def epsilon(self) -> float:
        """Relative distance Gamma/Gamma_c - 1 above the weak-dissipation threshold."""
        return self.Gamma / self.gamma_c_weak - 1.0


def normalize(cfg: PhysicalConfig) -> Dimensionless:
    """Reduce a physical configuration to (eta, Gamma, theta).

    Raises InvalidConfigError when v = 0, since eta must be positive.
    """
    eta = cfg.v / (cfg.omega_s * cfg.d)
    return Dimensionless(
        eta=eta,
        Gamma=cfg.gamma / (2.0 * cfg.omega_s),
        theta=K_B * cfg.T / (HBAR * cfg.omega_s),
    )


def force_scale(cfg: PhysicalConfig) -> float:
    """F_0 = hbar omega_s / d^3 in N/m^2 (numerically equal to pN/um^2)."""
    return HBAR * cfg.omega_s / cfg.d ** 3
