"""scikit-learn wrapper: kernel coefficients as a feature transform."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .curve import BranchData, build_frame
from .kernels import KernelEvaluator

__all__ = ["KernelTransformer"]


class KernelTransformer(TransformerMixin, BaseEstimator):
    """Map point pairs to kernel coefficients.

    Input rows are ``(re zQ, im zQ, re zP, im zP)``; output rows are
    ``(re aQ, im aQ, re aP, im aP)``, the same layout as the CLI grid dump.

    Parameters
    ----------
    n : int, default=2
        Number of branes.
    which : {"s1", "s2", "a1", "a2"}, default="s1"
    branch_points : sequence of float, optional
        Required for ``n >= 4``; the frame is built in :meth:`fit`.

    Examples
    --------
    >>> import numpy as np
    >>> X = np.array([[0.3, 1.0, -0.5, 0.7]])
    >>> KernelTransformer(n=2).fit_transform(X).shape
    (1, 4)
    """

    def __init__(self, n=2, which="s1", branch_points=None):
        self.n = n
        self.which = which
        self.branch_points = branch_points

    def fit(self, X, y=None):
        X = check_array(X, dtype=float)
        if X.shape[1] != 4:
            raise ValueError("expected 4 columns: re_zQ, im_zQ, re_zP, im_zP")
        frame = None
        if self.n >= 4:
            if self.branch_points is None:
                raise ValueError("branch_points are required for n >= 4")
            frame = build_frame(BranchData(self.branch_points))
        self.frame_ = frame
        self.evaluator_ = KernelEvaluator(self.n, self.which, frame)
        self.n_features_in_ = 4
        return self

    def transform(self, X):
        check_is_fitted(self, "evaluator_")
        X = check_array(X, dtype=float)
        if X.shape[1] != 4:
            raise ValueError("expected 4 columns: re_zQ, im_zQ, re_zP, im_zP")
        zQ = X[:, 0] + 1j * X[:, 1]
        zP = X[:, 2] + 1j * X[:, 3]
        f = self.evaluator_.forms(zQ, zP)
        return np.column_stack([f.aQ.real, f.aQ.imag, f.aP.real, f.aP.imag])
