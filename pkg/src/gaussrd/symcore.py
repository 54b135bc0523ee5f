"""Symplectic linear algebra and Gaussian-state primitives.

Covariance matrices use the convention ``Gamma_ij = <R_i R_j + R_j R_i>`` with
quadrature ordering ``(X_1, P_1, ..., X_n, P_n)``, so the vacuum is the
identity and a one-mode state is physical iff ``det(gamma) >= 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, NamedTuple, Sequence

import numpy as np

from .exceptions import DomainError

Base = Literal["bits", "nats"]

J = np.array([[0.0, -1.0], [1.0, 0.0]])
LAMBDA = np.diag([1.0, -1.0])  # phase-space transposition X -> X, P -> -P

SYMMETRY_TOL = 1e-12
UNCERTAINTY_TOL = 1e-10
PURITY_TOL = 1e-9
SQRT_CLIP = 1e-12
PURE_SNAP = 1e-12  # |gamma_s - 1| below this is treated as a pure state


def log_scale(base: Base) -> float:
    """Natural-log divisor converting nats to ``base``."""
    if base == "bits":
        return math.log(2.0)
    if base == "nats":
        return 1.0
    raise DomainError(f"unknown entropy base {base!r}; expected 'bits' or 'nats'")


@dataclass(frozen=True)
class SymplecticForm:
    """Block-diagonal symplectic form ``(+)_k s_k J`` with per-mode signs ``s_k``."""

    signs: tuple[int, ...]

    def __post_init__(self):
        if not self.signs or any(s not in (1, -1) for s in self.signs):
            raise DomainError(f"signs must be a non-empty tuple of +1/-1, got {self.signs}")

    @classmethod
    def standard(cls, n_modes: int) -> "SymplecticForm":
        return cls((1,) * n_modes)

    @classmethod
    def joint(cls, n_modes: int = 1) -> "SymplecticForm":
        """The form ``J_n (+) (-J_n)`` attached to reference-output joint states."""
        return cls((1,) * n_modes + (-1,) * n_modes)

    @property
    def n_modes(self) -> int:
        return len(self.signs)

    @property
    def matrix(self) -> np.ndarray:
        n = self.n_modes
        out = np.zeros((2 * n, 2 * n))
        for k, s in enumerate(self.signs):
            out[2 * k:2 * k + 2, 2 * k:2 * k + 2] = s * J
        return out

    def flip(self) -> np.ndarray:
        """Diagonal matrix mapping this form onto the standard one by congruence.

        Modes with sign -1 are conjugated by ``diag(1, -1)``, which turns
        ``-J`` into ``J``.
        """
        d = np.ones(2 * self.n_modes)
        for k, s in enumerate(self.signs):
            if s < 0:
                d[2 * k + 1] = -1.0
        return np.diag(d)


def symplectic_form(n_modes: int) -> np.ndarray:
    """Standard ``J_n = (+)_k J``."""
    return SymplecticForm.standard(n_modes).matrix


def _as_square(gamma, name="covariance matrix") -> np.ndarray:
    gamma = np.asarray(gamma, dtype=float)
    if gamma.ndim != 2 or gamma.shape[0] != gamma.shape[1] or gamma.shape[0] % 2:
        raise DomainError(f"{name} must be a square matrix of even size, got shape {gamma.shape}")
    if not np.all(np.isfinite(gamma)):
        raise DomainError(f"{name} contains non-finite entries")
    return gamma


def _check_symmetric(gamma: np.ndarray) -> None:
    scale = max(1.0, float(np.max(np.abs(gamma))))
    if np.max(np.abs(gamma - gamma.T)) > SYMMETRY_TOL * scale:
        raise DomainError("covariance matrix is not symmetric")


def _resolve_form(gamma: np.ndarray, form: SymplecticForm | None) -> SymplecticForm:
    n = gamma.shape[0] // 2
    if form is None:
        return SymplecticForm.standard(n)
    if form.n_modes != n:
        raise DomainError(f"form acts on {form.n_modes} modes but matrix has {n}")
    return form


def bosonic_entropy(x, base: Base = "bits"):
    """Entropy ``g(x) = (x+1) log(x+1) - x log x`` of a thermal mode.

    Accepts scalars or arrays. Values in ``(-1e-12, 0]`` are treated as zero.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr < -SQRT_CLIP) or np.any(np.isnan(arr)):
        raise DomainError(f"bosonic entropy needs x >= 0, got {x}")
    arr = np.maximum(arr, 0.0)
    out = (xlogy(arr + 1.0) - xlogy(arr)) / log_scale(base)
    return float(out) if out.ndim == 0 else out


def xlogy(a: np.ndarray) -> np.ndarray:
    """``a log a`` with the ``0 log 0 = 0`` limit."""
    a = np.asarray(a, dtype=float)
    safe = np.where(a > 0, a, 1.0)
    return np.where(a > 0, a * np.log(safe), 0.0)


def symplectic_eigenvalues(gamma, form: SymplecticForm | None = None) -> np.ndarray:
    """Symplectic eigenvalues of ``gamma`` with respect to ``form``, descending.

    Non-standard forms are handled by conjugating the sign-flipped modes with
    ``diag(1, -1)`` and diagonalising against the standard form.
    """
    gamma = _as_square(gamma)
    _check_symmetric(gamma)
    form = _resolve_form(gamma, form)
    if np.linalg.eigvalsh(0.5 * (gamma + gamma.T))[0] <= 0:
        raise DomainError("covariance matrix is not positive definite")
    d = form.flip()
    g = d @ gamma @ d
    n = form.n_modes
    if n == 1:
        return np.array([math.sqrt(np.linalg.det(g))])
    # eigenvalues of J^-1 g are +-i nu_k
    jn = symplectic_form(n)
    ev = np.abs(np.linalg.eigvals(np.linalg.solve(jn, g)).imag)
    ev = np.sort(ev)[::-1]
    return 0.5 * (ev[0::2] + ev[1::2])


class UncertaintyReport(NamedTuple):
    valid: bool
    min_eigenvalue: float


def check_uncertainty(gamma, form: SymplecticForm | None = None) -> UncertaintyReport:
    """Test ``gamma - i*form >= 0`` via the smallest Hermitian eigenvalue."""
    gamma = _as_square(gamma)
    _check_symmetric(gamma)
    form = _resolve_form(gamma, form)
    herm = gamma - 1j * form.matrix
    lam = float(np.linalg.eigvalsh(0.5 * (herm + herm.conj().T))[0])
    return UncertaintyReport(lam >= -UNCERTAINTY_TOL, lam)


def require_physical(gamma, form: SymplecticForm | None = None) -> np.ndarray:
    gamma = _as_square(gamma)
    report = check_uncertainty(gamma, form)
    if not report.valid:
        raise DomainError(
            f"covariance matrix violates the uncertainty relation "
            f"(min eigenvalue {report.min_eigenvalue:.3e})"
        )
    return gamma


class Williamson(NamedTuple):
    S: np.ndarray
    gamma_s: float

    @property
    def n_s(self) -> float:
        """Mean photon number of the thermal normal form."""
        return (self.gamma_s - 1.0) / 2.0


def williamson_one_mode(gamma) -> Williamson:
    """Symplectic ``S`` with ``S^T gamma S = gamma_s I`` for a one-mode CM.

    ``S`` is built as a rotation onto the principal axes followed by the
    squeeze that equalises them. Symplectic eigenvalues within 1e-12 of one
    are snapped to exactly one so that pure inputs stay pure.
    """
    gamma = require_physical(gamma)
    if gamma.shape != (2, 2):
        raise DomainError(f"expected a one-mode (2x2) CM, got shape {gamma.shape}")
    gamma = 0.5 * (gamma + gamma.T)
    lam, rot = np.linalg.eigh(gamma)
    if np.linalg.det(rot) < 0:
        rot[:, 0] = -rot[:, 0]
    gamma_s = math.sqrt(lam[0] * lam[1])
    if abs(gamma_s - 1.0) <= PURE_SNAP:
        gamma_s = 1.0
    squeeze = np.diag([(lam[1] / lam[0]) ** 0.25, (lam[0] / lam[1]) ** 0.25])
    return Williamson(rot @ squeeze, gamma_s)


def psd_sqrt(a: np.ndarray, clip: float = SQRT_CLIP) -> np.ndarray:
    """Square root of a symmetric PSD matrix; eigenvalues in ``[-clip, 0]`` become 0."""
    a = 0.5 * (a + a.T)
    w, v = np.linalg.eigh(a)
    scale = max(1.0, float(np.max(np.abs(w))))
    if w[0] < -clip * scale:
        raise DomainError(f"matrix square root of an indefinite argument (eigenvalue {w[0]:.3e})")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.T


def purification_beta(gamma) -> np.ndarray:
    """Off-diagonal block ``beta = J_n sqrt(-(J_n^-1 gamma)^2 - I)``.

    The argument of the square root is similar to the symmetric matrix
    ``Y = g^T J^T gamma J g - I`` with ``g = gamma^(1/2)``, so the root is
    taken on ``Y`` and mapped back.
    """
    gamma = require_physical(gamma)
    gamma = 0.5 * (gamma + gamma.T)
    n = gamma.shape[0] // 2
    jn = symplectic_form(n)
    if n == 1:
        det = np.linalg.det(gamma)
        if det - 1.0 < -SQRT_CLIP:
            raise DomainError(f"matrix square root of an indefinite argument ({det - 1.0:.3e})")
        # same snap as williamson_one_mode: roundoff in det would otherwise give beta ~ 1e-8
        if abs(math.sqrt(max(det, 0.0)) - 1.0) <= PURE_SNAP:
            return np.zeros((2, 2))
        return math.sqrt(det - 1.0) * J
    half = psd_sqrt(gamma)
    half_inv = np.linalg.inv(half)
    y = half @ jn.T @ gamma @ jn @ half - np.eye(2 * n)
    root = half_inv @ psd_sqrt(y) @ half
    return jn @ root


def purification_cm(gamma) -> np.ndarray:
    """CM ``[[gamma, beta], [beta^T, gamma]]`` of the Schmidt purification."""
    gamma = require_physical(gamma)
    beta = purification_beta(gamma)
    return np.block([[gamma, beta], [beta.T, gamma]])


def gaussian_entropy(gamma, form: SymplecticForm | None = None, base: Base = "bits") -> float:
    """Von Neumann entropy ``sum_k g((nu_k - 1)/2)`` of a zero-mean Gaussian state."""
    nu = symplectic_eigenvalues(gamma, form)
    if nu[-1] < 1.0 - PURITY_TOL:
        raise DomainError(f"unphysical state: symplectic eigenvalue {nu[-1]:.12g} < 1")
    return float(np.sum(bosonic_entropy((nu - 1.0) / 2.0, base)))


def quadratic_expectation(q, gamma) -> float:
    """Mean of ``r^T Q r / 2`` in the zero-mean Gaussian state with CM ``gamma``.

    With symmetrised second moments ``<r_i r_j> = Gamma_ij / 2`` this is
    ``Tr(Q Gamma) / 4``.
    """
    q = np.asarray(q, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    if q.shape != gamma.shape or q.ndim != 2:
        raise DomainError(f"dimension mismatch: Q {q.shape} vs CM {gamma.shape}")
    return 0.25 * float(np.sum(q * gamma.T))


def rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])
