"""Construction of one-mode source covariance matrices from scalar descriptions."""
from __future__ import annotations

import math

import numpy as np

from .exceptions import DomainError
from .symcore import require_physical


def cm_from_entries(a: float, c: float, b: float) -> np.ndarray:
    """``[[a, c], [c, b]]``, checked against the uncertainty relation."""
    return require_physical(np.array([[a, c], [c, b]], dtype=float))


def thermal_cm(n_s: float) -> np.ndarray:
    if not n_s >= 0:
        raise DomainError(f"N_s must be nonnegative, got {n_s}")
    return (2.0 * n_s + 1.0) * np.eye(2)


def family_cm(trace: float, n_s: float) -> np.ndarray:
    """``diag(a, b)`` with ``a + b = trace`` and ``ab = (2 N_s + 1)^2``, ``a >= b``."""
    if not n_s >= 0:
        raise DomainError(f"N_s must be nonnegative, got {n_s}")
    gamma_s = 2.0 * n_s + 1.0
    if not trace >= 2.0 * gamma_s:
        raise DomainError(f"trace {trace} is below 2(2N_s + 1) = {2.0 * gamma_s}")
    half = 0.5 * trace
    a = half + math.sqrt(max(half * half - gamma_s * gamma_s, 0.0))
    b = gamma_s * gamma_s / a
    return np.diag([a, b])
