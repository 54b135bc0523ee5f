"""Rate-distortion of one-mode Gaussian quantum sources under EPR-type distortion."""
from .channel import GaussianChannel, apply, joint_cm, validate_channel
from .coherent import NoiseParams, coherent_info, coherent_info_from_cm, d_values
from .distortion import average_distortion, canonical_distortion, minimal_distortion
from .estimator import GaussianRateDistortion
from .exceptions import DomainError, NumericalError
from .ratedist import brute_force_rate, pure_state_rate, rate_distortion, rd_curve
from .symcore import bosonic_entropy, symplectic_eigenvalues, williamson_one_mode

__version__ = "0.1.0"

__all__ = [
    "GaussianChannel",
    "GaussianRateDistortion",
    "DomainError",
    "NumericalError",
    "NoiseParams",
    "apply",
    "average_distortion",
    "bosonic_entropy",
    "brute_force_rate",
    "canonical_distortion",
    "coherent_info",
    "coherent_info_from_cm",
    "d_values",
    "joint_cm",
    "minimal_distortion",
    "pure_state_rate",
    "rate_distortion",
    "rd_curve",
    "symplectic_eigenvalues",
    "validate_channel",
    "williamson_one_mode",
]
