import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from superprop.estimator import KernelTransformer
from superprop.kernels import kernel


def test_transform_matches_kernel(rng):
    X = np.column_stack([rng.uniform(-1, 1, 10), rng.uniform(0.1, 2, 10),
                         rng.uniform(-1, 1, 10), rng.uniform(0.1, 2, 10)])
    out = KernelTransformer(n=3, which="s2").fit_transform(X)
    f = kernel(X[:, 0] + 1j * X[:, 1], X[:, 2] + 1j * X[:, 3], "s2", 3)
    assert np.allclose(out, np.column_stack([f.aQ.real, f.aQ.imag, f.aP.real, f.aP.imag]),
                       rtol=0, atol=1e-15)


def test_theta_case_and_params():
    est = KernelTransformer(n=4, branch_points=[0, 1, 2])
    X = np.array([[0.3, 1.0, 1.5, 0.4]])
    out = make_pipeline(est).fit_transform(X)
    assert out.shape == (1, 4) and np.all(np.isfinite(out))
    assert clone(est).get_params()["branch_points"] == [0, 1, 2]


def test_errors():
    with pytest.raises(NotFittedError):
        KernelTransformer().transform(np.zeros((1, 4)))
    with pytest.raises(ValueError):
        KernelTransformer().fit(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        KernelTransformer(n=4).fit(np.ones((1, 4)))
