"""scikit-learn style facade over the local limit expansion."""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .expansion import GRAM, a1_closed_form, asymptotic_p, correction_polynomials
from .realization import standard_basis
from .walk import validate


class LatticeLCLT(BaseEstimator):
    """Predict ``p(n, 0, y)`` from the truncated expansion of a fixed walk.

    Parameters are the six step probabilities (``"p/q"`` strings, Fractions
    or numbers) and the number of correction terms ``order``.  ``fit`` takes
    no data; it builds the standard realization and the correction
    polynomials.  ``predict`` takes rows ``(n, y1, y2)``.
    """

    def __init__(self, alpha="1/6", alpha_p="1/6", beta="1/6", beta_p="1/6",
                 gamma="1/6", gamma_p="1/6", order=2):
        self.alpha = alpha
        self.alpha_p = alpha_p
        self.beta = beta
        self.beta_p = beta_p
        self.gamma = gamma
        self.gamma_p = gamma_p
        self.order = order

    def fit(self, X=None, y=None):
        if int(self.order) < 0:
            raise ValueError("order must be non-negative")
        self.walk_ = validate(self.alpha, self.alpha_p, self.beta, self.beta_p,
                              self.gamma, self.gamma_p)
        self.basis_ = standard_basis(self.walk_)
        self.P_ = correction_polynomials(self.walk_, int(self.order)) if self.order else []
        self.a1_ = a1_closed_form(self.walk_, 0, 0, GRAM)
        return self

    def predict(self, X):
        """Approximate ``p(n, 0, (y1, y2))`` for each row; 0 off the periodic class."""
        check_is_fitted(self, "walk_")
        X = check_array(X, dtype=np.int64)
        if X.shape[1] != 3:
            raise ValueError("X must have columns n, y1, y2")
        out = np.empty(X.shape[0])
        for i, (n, y1, y2) in enumerate(X):
            if self.walk_.is_periodic and (n - (y1 - y2)) % 3:
                out[i] = 0.0
                continue
            out[i] = asymptotic_p(self.walk_, int(n), (0, 0), (int(y1), int(y2)),
                                  int(self.order), self.basis_, self.P_)
        return out

    def leading_coefficient(self, y1=0, y2=0):
        """Exact ``a1(y)`` for the fitted walk."""
        check_is_fitted(self, "walk_")
        return a1_closed_form(self.walk_, y1, y2, GRAM)

    def score(self, X, y):
        """Negative max relative error against reference probabilities."""
        pred = self.predict(X)
        y = np.asarray(y, dtype=float)
        mask = y != 0
        if not mask.any():
            return -float(np.abs(pred).max())
        return -float(np.max(np.abs(pred[mask] - y[mask]) / y[mask]))
