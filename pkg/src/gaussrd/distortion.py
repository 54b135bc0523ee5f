"""Quadratic distortion observable and its minimisation over one-mode SL(2, R)."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from .channel import GaussianChannel, _require_unit_gain, validate_channel
from .exceptions import DomainError, NumericalError
from .symcore import LAMBDA, purification_beta, require_physical, rotation, williamson_one_mode

# Fixed multi-start lattice over (theta1, log z, theta2).
START_LATTICE = tuple(itertools.product((0.0, math.pi / 2), (-0.5, 0.5), (0.0, math.pi / 2)))
# coarse stopping: the Newton polish supplies the final digits
NM_OPTIONS = {"xatol": 1e-4, "fatol": 1e-8, "maxfev": 2000}
SIMPLEX_STEP = 0.5
STALL_TOL = 1e-10


@dataclass(frozen=True)
class DistortionForm:
    """``d = 1/2 sum_i [(a_x X_Ai - b_x X_Bi)^2 + (a_p P_Ai + b_p P_Bi)^2]``.

    ``q`` is the coefficient matrix of ``d = r^T q r / 2`` with the receiver
    modes ``B`` first and the sender modes ``A`` second.
    """

    n_modes: int = 1
    gains: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)

    @property
    def q(self) -> np.ndarray:
        n = self.n_modes
        ax, bx, ap, bp = self.gains
        q = np.zeros((4 * n, 4 * n))
        for i in range(n):
            xb, pb = 2 * i, 2 * i + 1
            xa, pa = 2 * n + 2 * i, 2 * n + 2 * i + 1
            q[xa, xa] += ax * ax
            q[xb, xb] += bx * bx
            q[xa, xb] = q[xb, xa] = -ax * bx
            q[pa, pa] += ap * ap
            q[pb, pb] += bp * bp
            q[pa, pb] = q[pb, pa] = ap * bp
        return q


def build_form(n_modes: int = 1, gains=(1.0, 1.0, 1.0, 1.0)) -> DistortionForm:
    if n_modes < 1:
        raise DomainError(f"n_modes must be positive, got {n_modes}")
    gains = tuple(float(g) for g in gains)
    if len(gains) != 4 or any(not g > 0 for g in gains):
        raise DomainError(f"gains must be four positive reals, got {gains}")
    return DistortionForm(n_modes, gains)


def gain_modified_form(k: float, compensate: str = "amplify", n_modes: int = 1) -> DistortionForm:
    """Distortion forms for a channel with amplitude gain ``k``.

    ``"amplify"`` rescales the output back up,
    ``(X_A/k - X_B)^2 + (P_A/k + k P_B)^2``; ``"attenuate"`` compares with the
    damped input, ``(X_A - k X_B)^2 + (P_A + k P_B)^2``.
    """
    if compensate == "amplify":
        return build_form(n_modes, (1.0 / k, 1.0, 1.0 / k, k))
    if compensate == "attenuate":
        return build_form(n_modes, (1.0, k, 1.0, k))
    raise DomainError(f"compensate must be 'amplify' or 'attenuate', got {compensate!r}")


def _distortion_terms(gamma):
    gamma = require_physical(gamma)
    if gamma.shape != (2, 2):
        raise DomainError(f"expected a one-mode CM, got shape {gamma.shape}")
    return gamma, purification_beta(gamma) @ LAMBDA


def average_distortion(ch: GaussianChannel, gamma) -> float:
    """``(Tr N + Tr M^T gamma M + Tr gamma - 2 Tr M beta L) / 4`` for unit-gain ``M``."""
    _require_unit_gain(ch)
    gamma, bl = _distortion_terms(gamma)
    M = ch.M
    return 0.25 * float(
        np.trace(ch.N) + np.trace(M.T @ gamma @ M) + np.trace(gamma) - 2.0 * np.trace(M @ bl)
    )


class MinimalDistortion(NamedTuple):
    d_min: float
    M_star: np.ndarray
    omega: float


def thermal_optimal_map(gamma_s: float, kappa: float = 0.0) -> np.ndarray:
    """Distortion-optimal unit-determinant map for the thermal CM ``gamma_s I``.

    ``[[c, s + kappa], [s - kappa, c]]`` with ``s = sqrt(gamma_s^2 - 1) / (2 gamma_s)``
    and ``c = sqrt(1 + s^2 - kappa^2)``; every admissible ``kappa`` gives the
    same distortion.
    """
    s = math.sqrt(gamma_s * gamma_s - 1.0) / (2.0 * gamma_s)
    c2 = 1.0 + s * s - kappa * kappa
    if c2 < 0:
        raise DomainError(f"|kappa| must not exceed sqrt(1 + s^2) = {math.sqrt(1 + s * s):.6g}")
    c = math.sqrt(c2)
    return np.array([[c, s + kappa], [s - kappa, c]])


def thermal_minimal_distortion(gamma_s: float) -> MinimalDistortion:
    """Closed form: ``d_min = (1/gamma_s + 3 gamma_s) / 4``, ``Omega = 2 cosh 2r_s``."""
    if gamma_s < 1.0:
        raise DomainError(f"symplectic eigenvalue must be >= 1, got {gamma_s}")
    d_min = 0.25 * (1.0 / gamma_s + 3.0 * gamma_s)
    omega = 2.0 + (gamma_s * gamma_s - 1.0) / (gamma_s * gamma_s)
    return MinimalDistortion(d_min, thermal_optimal_map(gamma_s), omega)


def sl2_from_params(theta1: float, log_z: float, theta2: float) -> np.ndarray:
    z = math.exp(log_z)
    return rotation(theta1) @ np.diag([z, 1.0 / z]) @ rotation(theta2)


def _objective(gamma, bl, const):
    # scalar arithmetic: this runs a few thousand times per minimisation
    g11, g12, g22 = float(gamma[0, 0]), float(gamma[0, 1]), float(gamma[1, 1])
    c11, c12, c21, c22 = (float(v) for v in bl.ravel())

    def f(params):
        t1, log_z, t2 = params
        z = math.exp(log_z)
        a, b = math.cos(t1), math.sin(t1)
        c, d = math.cos(t2), math.sin(t2)
        # R(t1) diag(z, 1/z) R(t2)
        u1, u2, v1, v2 = a * z, -b / z, b * z, a / z
        m11, m12 = u1 * c + u2 * d, -u1 * d + u2 * c
        m21, m22 = v1 * c + v2 * d, -v1 * d + v2 * c
        quad = (g11 * (m11 * m11 + m12 * m12) + 2.0 * g12 * (m11 * m21 + m12 * m22)
                + g22 * (m21 * m21 + m22 * m22))
        cross = m11 * c11 + m12 * c21 + m21 * c12 + m22 * c22
        return 0.25 * (quad + const - 2.0 * cross)

    return f


def _kkt_polish(M, gamma, bl, iters=30):
    """Newton iterations on the Lagrange system of ``min f(M) s.t. det M = 1``.

    Unknowns are the row-major entries of ``M`` and the multiplier. The
    Jacobian is singular along degenerate families of minimisers, so steps
    use least squares.
    """
    G = np.kron(gamma, np.eye(2))
    c = bl.T.ravel()
    P = np.array([[0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]], dtype=float)
    m = M.ravel().copy()
    pm = P @ m
    lam = float(pm @ (0.5 * G @ m - 0.5 * c) / (pm @ pm))
    for _ in range(iters):
        pm = P @ m
        res = np.concatenate([0.5 * G @ m - 0.5 * c - lam * pm, [0.5 * m @ pm - 1.0]])
        if np.max(np.abs(res)) < 1e-15 * max(1.0, float(np.max(np.abs(gamma)))):
            break
        jac = np.zeros((5, 5))
        jac[:4, :4] = 0.5 * G - lam * P
        jac[:4, 4] = -pm
        jac[4, :4] = pm
        step = np.linalg.lstsq(jac, -res, rcond=None)[0]
        m = m + step[:4]
        lam += step[4]
    out = m.reshape(2, 2)
    det = np.linalg.det(out)
    if not det > 0:
        return None
    return out / math.sqrt(det)


def minimal_distortion(gamma) -> MinimalDistortion:
    """Minimise the noiseless average distortion over unit-determinant maps.

    The search runs in the Williamson frame, ``M = S A`` with
    ``S^T gamma S = gamma_s I``, where the quadratic term is isotropic and
    squeezed sources stay well conditioned. Nelder-Mead starts from a fixed
    lattice of eight points over ``A = R(theta1) diag(z, 1/z) R(theta2)``,
    the best start is chosen by ``(d, theta1, z, theta2)``, and Newton steps
    on the constrained stationarity conditions refine it.
    """
    gamma, bl = _distortion_terms(gamma)
    w = williamson_one_mode(gamma)
    frame_gamma = w.gamma_s * np.eye(2)
    frame_bl = bl @ w.S
    f = _objective(frame_gamma, frame_bl, float(np.trace(gamma)))
    runs = []
    for x0 in START_LATTICE:
        x0 = np.array(x0)
        simplex = np.vstack([x0, x0 + SIMPLEX_STEP * np.eye(3)])
        res = minimize(f, x0, method="Nelder-Mead", options={**NM_OPTIONS, "initial_simplex": simplex})
        fs = res.final_simplex[1]
        spread = float(np.max(fs) - np.min(fs)) / max(1.0, abs(float(res.fun)))
        runs.append((float(res.fun), float(res.x[0]), math.exp(res.x[1]), float(res.x[2]),
                     bool(res.success) or spread <= STALL_TOL, res))
    runs.sort(key=lambda r: r[:4])
    best = runs[0]
    if not best[4]:
        raise NumericalError(
            "distortion minimisation did not converge",
            {"d": best[0], "nfev": int(best[5].nfev), "message": str(best[5].message)},
        )
    A = sl2_from_params(*best[5].x)
    d = best[0]
    polished = _kkt_polish(A, frame_gamma, frame_bl)
    if polished is not None:
        d_pol = 0.25 * (w.gamma_s * float(np.sum(polished * polished)) + float(np.trace(gamma))
                        - 2.0 * float(np.trace(polished @ frame_bl)))
        if d_pol <= d + 1e-13:
            A = polished
    M = w.S @ A
    d = average_distortion(GaussianChannel(M, np.zeros((2, 2))), gamma)
    return MinimalDistortion(d, M, float(np.sum(A * A)))


class DistortionReport(NamedTuple):
    d_bar: float
    d_min: float
    n_n: float
    omega: float
    M_star: np.ndarray


def canonical_distortion(ch: GaussianChannel, gamma, minimum: MinimalDistortion | None = None
                         ) -> DistortionReport:
    """Average distortion above the input-dependent floor, ``N_n = d - d_min``."""
    if not validate_channel(ch).valid:
        raise DomainError("channel is not completely positive")
    d_bar = average_distortion(ch, gamma)
    if minimum is None:
        minimum = minimal_distortion(gamma)
    return DistortionReport(d_bar, minimum.d_min, d_bar - minimum.d_min, minimum.omega, minimum.M_star)
