"""Closed-form coherent information of the noisy reference-output state."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channel import JOINT_FORM
from .exceptions import DomainError
from .symcore import Base, bosonic_entropy, gaussian_entropy, log_scale

DISC_CLIP = 1e-12


@dataclass(frozen=True)
class NoiseParams:
    """Source photon number with the determinant and trace invariants of the noise.

    ``delta`` is a quarter of the noise determinant and ``tau`` half of the
    trace of the noise expressed in the source's Williamson frame.
    """

    n_s: float
    delta: float
    tau: float

    def __post_init__(self):
        if self.n_s < 0 or self.delta < 0 or self.tau < 0:
            raise DomainError(f"noise parameters must be nonnegative: {self}")

    @property
    def x(self) -> float:
        return self.delta + (self.n_s + 0.5) * self.tau


class DValues(NamedTuple):
    d0: float
    d1: float
    d2: float


def d_values(p: NoiseParams) -> DValues:
    """Halved symplectic eigenvalues of the output (``d0``) and joint (``d1, d2``) CMs.

    Uses ``d1^2 = d0^2 - N_s(N_s+1) - (x - sqrt(D))/2`` and
    ``d2^2 = 1/4 + (x - sqrt(D))/2`` with ``x - sqrt(D)`` written without
    cancellation, so a pure source gives ``d1 == d0`` and ``d2 == 1/2`` exactly.
    """
    x = p.x
    c = 4.0 * p.n_s * (p.n_s + 1.0) * p.delta
    disc = x * x - c
    if disc < -DISC_CLIP * max(1.0, x * x):
        raise DomainError(f"unphysical noise parameters (discriminant {disc:.3e}): {p}")
    root = math.sqrt(max(disc, 0.0))
    gap = c / (x + root) if c > 0 else 0.0  # x - sqrt(x^2 - c)
    d0_sq = x + (p.n_s + 0.5) ** 2
    return DValues(
        math.sqrt(d0_sq),
        math.sqrt(d0_sq - p.n_s * (p.n_s + 1.0) - 0.5 * gap),
        math.sqrt(0.25 + 0.5 * gap),
    )


def coherent_info(p: NoiseParams, base: Base = "bits") -> float:
    """``g(d0 - 1/2) - g(d1 - 1/2) - g(d2 - 1/2)``; unclipped, may be negative."""
    d0, d1, d2 = d_values(p)
    return bosonic_entropy(d0 - 0.5, base) - bosonic_entropy(d1 - 0.5, base) - bosonic_entropy(d2 - 0.5, base)


def coherent_info_from_cm(joint, base: Base = "bits") -> float:
    """``S(output) - S(joint)`` from a 4x4 joint CM (output mode first)."""
    joint = np.asarray(joint, dtype=float)
    if joint.shape != (4, 4):
        raise DomainError(f"expected a 4x4 joint CM, got shape {joint.shape}")
    return gaussian_entropy(joint[:2, :2], base=base) - gaussian_entropy(joint, JOINT_FORM, base)


def tau_from_t(n_n: float, delta: float, omega: float, t: float) -> float:
    """``tau = N_n Omega + t sqrt(N_n^2 - delta) sqrt(Omega^2 - 4)``, ``-1 <= t <= 1``.

    ``t`` is the cosine of twice the angle between the noise principal axis
    and that of the source-frame map.
    """
    if n_n < 0:
        raise DomainError(f"N_n must be nonnegative, got {n_n}")
    if delta < 0 or delta > n_n * n_n * (1.0 + 1e-12) + 1e-15:
        raise DomainError(f"delta must lie in [0, N_n^2] = [0, {n_n * n_n:.6g}], got {delta}")
    if not -1.0 <= t <= 1.0:
        raise DomainError(f"t must lie in [-1, 1], got {t}")
    if omega < 2.0 - 1e-7:
        raise DomainError(f"Omega must be >= 2, got {omega}")
    spread = math.sqrt(max(n_n * n_n - delta, 0.0)) * math.sqrt(max(omega * omega - 4.0, 0.0))
    return n_n * omega + t * spread


def noise_matrix(n_n: float, delta: float, t: float, M, S) -> np.ndarray:
    """Explicit noise ``N`` with ``Tr N = 4 N_n``, ``det N = 4 delta`` and orientation ``t``.

    ``M`` is the channel's unit-determinant map and ``S`` the Williamson matrix
    of the source. The principal axes of ``N`` are placed at angle
    ``arccos(t)/2`` from the major axis of ``P = M^-1 S S^T M^-T`` so that
    ``Tr(N P) / 2`` equals ``tau_from_t``.
    """
    if delta < 0 or delta > n_n * n_n * (1.0 + 1e-12) + 1e-15:
        raise DomainError("delta must lie in [0, N_n^2]")
    M_inv = np.linalg.inv(np.asarray(M, dtype=float))
    P = M_inv @ S @ S.T @ M_inv.T
    _, vecs = np.linalg.eigh(0.5 * (P + P.T))
    major, minor = vecs[:, 1], vecs[:, 0]
    phi = 0.5 * math.acos(max(-1.0, min(1.0, t)))
    u = math.cos(phi) * major + math.sin(phi) * minor
    v = -math.sin(phi) * major + math.cos(phi) * minor
    half = math.sqrt(max(n_n * n_n - delta, 0.0))
    n1, n2 = 2.0 * (n_n + half), 2.0 * (n_n - half)
    return n1 * np.outer(u, u) + n2 * np.outer(v, v)


def entropy_slope(a, base: Base = "bits"):
    """``f(a) = log((a + 1)/a) / (2a + 1)``, the kernel of the delta-derivative of ``I_c``."""
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0):
        raise DomainError("entropy_slope needs a > 0")
    out = np.log1p(1.0 / a) / (2.0 * a + 1.0) / log_scale(base)
    return float(out) if out.ndim == 0 else out


def coherent_info_grid(n_s: float, delta, tau, base: Base = "bits") -> np.ndarray:
    """Vectorised :func:`coherent_info` over broadcastable ``delta`` and ``tau`` arrays."""
    delta, tau = np.broadcast_arrays(np.asarray(delta, dtype=float), np.asarray(tau, dtype=float))
    x = delta + (n_s + 0.5) * tau
    c = 4.0 * n_s * (n_s + 1.0) * delta
    disc = x * x - c
    if np.any(disc < -DISC_CLIP * np.maximum(1.0, x * x)):
        raise DomainError("unphysical noise parameters in grid")
    denom = x + np.sqrt(np.maximum(disc, 0.0))
    gap = np.divide(c, denom, out=np.zeros_like(c), where=c > 0)
    d0_sq = x + (n_s + 0.5) ** 2
    d0 = np.sqrt(d0_sq)
    d1 = np.sqrt(d0_sq - n_s * (n_s + 1.0) - 0.5 * gap)
    d2 = np.sqrt(0.25 + 0.5 * gap)
    return bosonic_entropy(d0 - 0.5, base) - bosonic_entropy(d1 - 0.5, base) - bosonic_entropy(d2 - 0.5, base)
