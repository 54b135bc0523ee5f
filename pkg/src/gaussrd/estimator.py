"""Scikit-learn style front end for the rate-distortion computation."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .ratedist import RatePoint, SourceSummary, analyze_source, clipping_point, rate_point
from .validation import check_cm, check_distortions


class GaussianRateDistortion(BaseEstimator):
    """Rate-distortion function of a one-mode Gaussian source.

    ``fit`` takes the source covariance matrix and precomputes its Williamson
    data and distortion floor. ``predict`` maps canonical distortions to
    rates, ``transform`` to the full witness table
    ``(n_n, r_i, delta, tau, d0, d1, d2)``.

    Parameters
    ----------
    base : {"bits", "nats"}
        Logarithm base of all entropic outputs.

    Examples
    --------
    >>> est = GaussianRateDistortion().fit(np.diag([1.5, 1.5]))
    >>> float(est.predict([0.0])[0])  # doctest: +ELLIPSIS
    0.9024101186...
    """

    def __init__(self, base="bits"):
        self.base = base

    def fit(self, X, y=None):
        X = check_cm(X)
        src = analyze_source(X)
        self.source_ = src
        self.gamma_s_ = src.gamma_s
        self.n_s_ = src.n_s
        self.omega_ = src.omega
        self.d_min_ = src.minimum.d_min
        self.M_star_ = src.minimum.M_star
        return self

    def _points(self, X) -> list[RatePoint]:
        check_is_fitted(self, "source_")
        return [rate_point(self.source_, v, self.base) for v in check_distortions(X)]

    def predict(self, X):
        return np.array([p.r_i for p in self._points(X)])

    def transform(self, X):
        return np.array([p.row() for p in self._points(X)]).reshape(-1, 7)

    def clipping_point(self):
        """Canonical distortion where the rate first vanishes, ``None`` if pure."""
        check_is_fitted(self, "source_")
        return clipping_point(None, self.base, source=self.source_)

    @property
    def summary(self) -> SourceSummary:
        check_is_fitted(self, "source_")
        return self.source_
