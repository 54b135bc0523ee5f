"""Input validation shared by the estimator and the CLI."""
from __future__ import annotations

import numpy as np
from sklearn.utils import check_array

from .exceptions import DomainError
from .symcore import check_uncertainty


def check_cm(X) -> np.ndarray:
    """Validate a one-mode covariance matrix and return it as a float array."""
    try:
        X = check_array(X, dtype=np.float64, ensure_2d=True, ensure_min_samples=2, ensure_min_features=2)
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    if X.shape != (2, 2):
        raise DomainError(f"expected a one-mode (2x2) covariance matrix, got shape {X.shape}")
    report = check_uncertainty(X)
    if not report.valid:
        raise DomainError(
            f"covariance matrix violates the uncertainty relation (min eigenvalue {report.min_eigenvalue:.3e})"
        )
    return X


def check_distortions(X) -> np.ndarray:
    """Flatten canonical distortions given as a 1-D array or a single column."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 2 and X.shape[1] == 1:
        X = X[:, 0]
    if X.ndim == 0:
        X = X[None]
    try:
        X = check_array(X[:, None], dtype=np.float64, ensure_min_samples=1)[:, 0]
    except ValueError as exc:
        raise DomainError(str(exc)) from exc
    if np.any(X < 0):
        raise DomainError("canonical distortion must be nonnegative")
    return X
