"""scikit-learn compatible front ends.

Curves are passed as the CSV matrix: one row per sample, columns
``t, x, y, z`` optionally followed by the nine derivative columns.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .formats import curve_from_array
from .geometry import DEFAULT_TOL, certify_tzitzeica, frenet

__all__ = ["FrenetFeatures", "TzitzeicaCertifier"]


def _validated_curve(X, provenance="estimator input"):
    X = check_array(X, dtype=np.float64, ensure_min_samples=7, ensure_all_finite=True)
    return curve_from_array(X, provenance)


class FrenetFeatures(TransformerMixin, BaseEstimator):
    """Stateless transformer: curve matrix -> per-sample invariants.

    Output columns are curvature, torsion, osculating-plane distance and
    the ratio torsion / distance^2 (NaN where undefined).
    """

    def fit(self, X, y=None):
        _validated_curve(X)
        self.n_features_in_ = np.asarray(X).shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        data = frenet(_validated_curve(X))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = data.tau / data.d**2
        return np.column_stack([data.k, data.tau, data.d, ratio])

    def get_feature_names_out(self, input_features=None):
        return np.array(["curvature", "torsion", "distance", "ratio"], dtype=object)


class TzitzeicaCertifier(BaseEstimator):
    """Estimate the curve constant of a sampled curve and certify it.

    Parameters
    ----------
    delta : float, optional
        Side-condition coefficient, if the curve is known to come from one.
    tol : float
    surfaces : tuple of str
        Surface names checked for containment.

    Attributes
    ----------
    report_ : TzitzeicaReport
    alpha_ : float
        Mean of torsion / distance^2 over the certified samples.
    wronskian_ : float
    passed_ : bool
    """

    def __init__(self, delta=None, tol=DEFAULT_TOL, surfaces=()):
        self.delta = delta
        self.tol = tol
        self.surfaces = surfaces

    def fit(self, X, y=None):
        curve = _validated_curve(X)
        self.n_features_in_ = np.asarray(X).shape[1]
        self.report_ = certify_tzitzeica(curve, self.delta, self.tol, tuple(self.surfaces))
        self.alpha_ = self.report_.alpha_est
        self.wronskian_ = self.report_.W0
        self.passed_ = self.report_.passed
        return self

    def _ratio(self, X):
        check_is_fitted(self, "alpha_")
        data = frenet(_validated_curve(X))
        with np.errstate(divide="ignore", invalid="ignore"):
            return data.tau / data.d**2

    def predict(self, X):
        """Boolean per sample: torsion / distance^2 within tol of the fitted constant."""
        ratio = self._ratio(X)
        return np.abs(ratio - self.alpha_) <= self.tol * abs(self.alpha_)

    def score(self, X, y=None):
        """Negative worst relative deviation of the ratio from the fitted constant."""
        ratio = self._ratio(X)
        dev = np.abs(ratio - self.alpha_) / abs(self.alpha_)
        return -float(np.nanmax(dev))
