"""Quantum and thermal friction between sheared plates near the instability threshold."""

__version__ = "0.1.0"

from .dispersion import (
    ModeRoots,
    TransverseWavevector,
    delta_determinant,
    growth_rate,
    instability_window,
    lossless_branches,
    lossy_roots,
    unstable_root,
)
from .friction import (
    ForceResult,
    force_deep_stable,
    force_exact,
    force_exact_thermal,
    force_log_asymptote,
    force_near_threshold,
    force_thermal_asymptote,
    integrand_exact,
    reflection,
)
from .params import Dimensionless, PhysicalConfig, force_scale, normalize
from .stability import BoundaryPoint, critical_eta, critical_gamma, epsilon_of, gamma_of_beta, is_stable
