"""Entanglement information rate-distortion of one-mode Gaussian sources."""
from __future__ import annotations

import math
from dataclasses import dataclass, astuple
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import brentq

from .coherent import NoiseParams, coherent_info, coherent_info_grid, d_values, tau_from_t
from .distortion import MinimalDistortion, minimal_distortion, thermal_minimal_distortion
from .exceptions import DomainError
from .symcore import Base, bosonic_entropy, require_physical, williamson_one_mode

THERMAL_TOL = 1e-12


@dataclass(frozen=True)
class SourceSummary:
    """Everything the rate function needs from the source CM."""

    gamma_s: float
    n_s: float
    S: np.ndarray
    minimum: MinimalDistortion
    thermal: bool

    @property
    def omega(self) -> float:
        return self.minimum.omega


def is_thermal(gamma) -> bool:
    gamma = np.asarray(gamma, dtype=float)
    scale = max(1.0, abs(gamma[0, 0]))
    return abs(gamma[0, 0] - gamma[1, 1]) <= THERMAL_TOL * scale and abs(gamma[0, 1]) <= THERMAL_TOL * scale


def analyze_source(gamma) -> SourceSummary:
    """Williamson data and distortion floor; thermal sources use the closed form."""
    gamma = require_physical(gamma)
    if gamma.shape != (2, 2):
        raise DomainError(f"expected a one-mode CM, got shape {gamma.shape}")
    w = williamson_one_mode(gamma)
    thermal = is_thermal(gamma)
    minimum = thermal_minimal_distortion(w.gamma_s) if thermal else minimal_distortion(gamma)
    return SourceSummary(w.gamma_s, w.n_s, w.S, minimum, thermal)


@dataclass(frozen=True)
class RatePoint:
    n_n: float
    r_i: float
    delta: float
    tau: float
    d0: float
    d1: float
    d2: float
    i_c: float  # unclipped coherent information

    FIELDS = ("n_n", "r_i", "delta", "tau", "d0", "d1", "d2")

    def row(self) -> tuple[float, ...]:
        return astuple(self)[:7]


def rate_point(source: SourceSummary, n_n: float, base: Base = "bits") -> RatePoint:
    """``R^I(N_n) = max{0, I_c(delta = N_n^2, tau = N_n Omega)}`` for an analysed source."""
    n_n = float(n_n)
    if not n_n >= 0 or not math.isfinite(n_n):
        raise DomainError(f"canonical distortion must be a finite nonnegative number, got {n_n}")
    p = NoiseParams(source.n_s, n_n * n_n, n_n * source.omega)
    d0, d1, d2 = d_values(p)
    i_c = coherent_info(p, base)
    return RatePoint(n_n, max(0.0, i_c), p.delta, p.tau, d0, d1, d2, i_c)


def rate_distortion(gamma, n_n: float, base: Base = "bits") -> RatePoint:
    return rate_point(analyze_source(gamma), n_n, base)


def rd_curve(gamma, n_n_values: Sequence[float], base: Base = "bits") -> list[RatePoint]:
    """Rate points on an ascending grid, sharing one source analysis."""
    values = np.asarray(n_n_values, dtype=float)
    if values.ndim != 1:
        raise DomainError("N_n grid must be one-dimensional")
    if values.size and (values[0] < 0 or np.any(np.diff(values) < 0)):
        raise DomainError("N_n grid must be nonnegative and ascending")
    source = analyze_source(gamma)
    return [rate_point(source, v, base) for v in values]


def pure_state_rate(n_s: float, n_n: float, base: Base = "bits") -> float:
    """``max{0, g(N_s + N_n) - g(N_sn1) - g(N_sn2)}``, the ``Omega = 2`` reduction."""
    if n_s < 0 or n_n < 0:
        raise DomainError("N_s and N_n must be nonnegative")
    outer = 1.0 + n_n
    root = math.sqrt(outer * outer + 4.0 * n_n * n_s)
    n_sn2 = 2.0 * n_n * n_s / (root + outer)  # (root - 1 - N_n) / 2
    n_sn1 = n_sn2 + n_n
    val = bosonic_entropy(n_s + n_n, base) - bosonic_entropy(n_sn1, base) - bosonic_entropy(n_sn2, base)
    return max(0.0, val)


@dataclass(frozen=True)
class GridSpec:
    n_delta: int = 201
    n_t: int = 81

    def __post_init__(self):
        if self.n_delta < 3 or self.n_t < 3:
            raise DomainError("grid resolutions must be at least 3")


class BruteForce(NamedTuple):
    i_min: float
    delta_star: float
    t_star: float
    delta_step: float


def brute_force_rate(gamma, n_n: float, grid: GridSpec = GridSpec(), base: Base = "bits",
                     source: SourceSummary | None = None) -> BruteForce:
    """Minimum of ``I_c`` over noise matrices of trace ``4 N_n`` on a ``(delta, t)`` grid.

    ``delta`` runs over ``[0, N_n^2]`` and ``t`` over ``[-1, 1]``. Exact ties
    resolve toward the larger ``delta``, then the smaller ``t``.
    """
    if source is None:
        source = analyze_source(gamma)
    n_n = float(n_n)
    if n_n < 0:
        raise DomainError("canonical distortion must be nonnegative")
    deltas = np.linspace(0.0, n_n * n_n, grid.n_delta)[::-1]
    ts = np.linspace(-1.0, 1.0, grid.n_t)
    omega = source.omega
    spread = np.sqrt(np.maximum(n_n * n_n - deltas, 0.0)) * math.sqrt(max(omega * omega - 4.0, 0.0))
    taus = n_n * omega + ts[None, :] * spread[:, None]
    values = coherent_info_grid(source.n_s, deltas[:, None], taus, base)
    i, j = np.unravel_index(int(np.argmin(values)), values.shape)
    return BruteForce(float(values[i, j]), float(deltas[i]), float(ts[j]), n_n * n_n / (grid.n_delta - 1))


def clipping_point(gamma, base: Base = "bits", source: SourceSummary | None = None) -> float | None:
    """Smallest ``N_n`` at which the closed-form ``I_c`` reaches zero (bisection).

    Returns ``None`` for pure sources, whose rate vanishes identically.
    """
    if source is None:
        source = analyze_source(gamma)
    if source.n_s == 0:
        return None

    def ic(n_n):
        return coherent_info(NoiseParams(source.n_s, n_n * n_n, n_n * source.omega), base)

    hi = 1.0
    while ic(hi) > 0:
        hi *= 2.0
        if hi > 1e8:
            raise DomainError("coherent information does not reach zero")
    return float(brentq(ic, 0.0, hi, xtol=1e-14, rtol=1e-14))
