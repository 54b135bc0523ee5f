"""Trace-preserving one-mode Gaussian channels at the covariance-matrix level."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import DomainError, NumericalError
from .symcore import LAMBDA, J, SymplecticForm, purification_beta, require_physical

JOINT_FORM = SymplecticForm.joint(1)
CHANNEL_TOL = 1e-10
GAIN_TOL = 1e-10


def _mat2(a, name):
    a = np.asarray(a, dtype=float)
    if a.shape != (2, 2):
        raise DomainError(f"{name} must be 2x2, got shape {a.shape}")
    return a


@dataclass(frozen=True, eq=False)
class GaussianChannel:
    """The map ``gamma -> M^T gamma M + N``."""

    M: np.ndarray
    N: np.ndarray

    def __post_init__(self):
        m = _mat2(self.M, "M")
        n = _mat2(self.N, "N")
        if np.max(np.abs(n - n.T)) > 1e-12 * max(1.0, float(np.max(np.abs(n)))):
            raise DomainError("noise matrix N must be symmetric")
        object.__setattr__(self, "M", m)
        object.__setattr__(self, "N", 0.5 * (n + n.T))

    @property
    def gain(self) -> float:
        """``K = det M``."""
        return float(np.linalg.det(self.M))

    @classmethod
    def identity(cls) -> "GaussianChannel":
        return cls(np.eye(2), np.zeros((2, 2)))


def apply(ch: GaussianChannel, gamma) -> np.ndarray:
    """Output CM ``M^T gamma M + N``."""
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != (2, 2):
        raise DomainError(f"channel acts on one mode; got CM of shape {gamma.shape}")
    gamma = require_physical(gamma)
    return ch.M.T @ gamma @ ch.M + ch.N


def _require_unit_gain(ch: GaussianChannel) -> None:
    if abs(ch.gain - 1.0) > GAIN_TOL:
        raise DomainError(
            f"det M = {ch.gain:.12g} != 1; fold the gain into the channel with normalize_gain first"
        )


def joint_cm(ch: GaussianChannel, gamma, allow_gain: bool = False) -> np.ndarray:
    """Joint CM of output Q' (first mode) and reference R (second mode).

    Blocks are ``[[M^T gamma M + N, M^T beta], [beta^T M, gamma]]``. The
    result is physical with respect to ``J (+) (-J)`` (``JOINT_FORM``) iff the
    channel passes :func:`validate_channel`. Channels with ``det M != 1`` are
    refused unless ``allow_gain`` is set; normalise them with
    :func:`normalize_gain` first.
    """
    if not allow_gain:
        _require_unit_gain(ch)
    gamma = np.asarray(gamma, dtype=float)
    out_block = apply(ch, gamma)
    beta = purification_beta(gamma)
    cross = ch.M.T @ beta
    return np.block([[out_block, cross], [cross.T, gamma]])


def finite_r_op(M, N, r: float) -> np.ndarray:
    """CM of the Gaussian operator realising ``(M, N)`` at finite squeezing ``r``.

    Blocks ``[[M^T A M + N, M^T C], [C M, A]]`` with ``A = cosh(r) I`` and
    ``C = sinh(r) diag(1, -1)``.
    """
    M = _mat2(M, "M")
    N = _mat2(N, "N")
    if not r > 0:
        raise DomainError(f"squeezing r must be positive, got {r}")
    a = math.cosh(r) * np.eye(2)
    c = math.sinh(r) * LAMBDA
    return np.block([[M.T @ a @ M + N, M.T @ c], [c @ M, a]])


def general_joint_cm(op, gamma) -> np.ndarray:
    """Joint CM produced by a general Gaussian CP map given by its operator CM.

    With ``Gt = (I (+) L) op (I (+) L)``, ``L = diag(1, -1)``, the blocks are

        [[Gt1 - Gt12 (Gt2 + gamma)^-1 Gt12^T,  Gt12 (Gt2 + gamma)^-1 beta],
         [beta^T (Gt2 + gamma)^-1 Gt12^T,       gamma - beta^T (Gt2 + gamma)^-1 beta]]
    """
    op = np.asarray(op, dtype=float)
    if op.shape != (4, 4):
        raise DomainError(f"operator CM must be 4x4, got shape {op.shape}")
    gamma = require_physical(gamma)
    beta = purification_beta(gamma)
    flip = np.diag([1.0, 1.0, 1.0, -1.0])
    gt = flip @ op @ flip
    g1, g12, g2 = gt[:2, :2], gt[:2, 2:], gt[2:, 2:]
    try:
        inv = np.linalg.inv(g2 + gamma)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("Gt2 + gamma is singular") from exc
    if not np.all(np.isfinite(inv)):
        raise NumericalError("Gt2 + gamma is singular")
    top = g1 - g12 @ inv @ g12.T
    off = g12 @ inv @ beta
    bottom = gamma - beta.T @ inv @ beta
    return np.block([[top, off], [off.T, bottom]])


class ChannelReport(NamedTuple):
    valid: bool
    slack: float


def validate_channel(ch: GaussianChannel) -> ChannelReport:
    """Complete-positivity check ``N >= 0`` and ``det N - (1 - K)^2 >= 0``."""
    slack = float(np.linalg.det(ch.N) - (1.0 - ch.gain) ** 2)
    psd = np.linalg.eigvalsh(ch.N)[0] >= -CHANNEL_TOL
    return ChannelReport(bool(psd and slack >= -CHANNEL_TOL), slack)


def simon_condition(gamma) -> float:
    """Determinant form of the uncertainty relation under ``J (+) (-J)``.

    ``det A det B - det A - det B + (1 + det C)^2 - Tr(J A J C J B J C^T)``
    for blocks ``[[A, C], [C^T, B]]``; nonnegative iff the state is physical.
    """
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != (4, 4):
        raise DomainError(f"expected a 4x4 CM, got shape {gamma.shape}")
    a, c, b = gamma[:2, :2], gamma[:2, 2:], gamma[2:, 2:]
    da, db, dc = np.linalg.det(a), np.linalg.det(b), np.linalg.det(c)
    return float(da * db - da - db + (1.0 + dc) ** 2 - np.trace(J @ a @ J @ c @ J @ b @ J @ c.T))


def normalize_gain(ch: GaussianChannel) -> tuple[GaussianChannel, float]:
    """Rescale ``M`` to unit determinant; returns the new channel and ``k = sqrt(K)``.

    ``N`` is left untouched. Reflecting maps (``K <= 0``) are not supported.
    """
    K = ch.gain
    if K <= 0:
        raise DomainError(f"gain K = det M = {K:.6g} <= 0 is not supported")
    k = math.sqrt(K)
    return GaussianChannel(ch.M / k, ch.N), k
