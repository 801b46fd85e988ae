import math

import numpy as np
import pytest

from superprop.exceptions import NonConvergence
from superprop.numerics import (QuadratureConfig, gauss_rule, integrate_path, integrate_segment,
                                integrate_segments, invert, is_positive_definite, polar_rule,
                                product_rule, ts_rule)


def test_beta_half_half_is_pi():
    # B(1/2, 1/2) with both endpoint singularities handled through the offsets
    val = integrate_segment(lambda s, da, db: 1.0 / np.sqrt(da * db), 0.0, 1.0, offsets=True)
    assert abs(val - math.pi) < 1e-12


def test_segments_vectorised():
    a = np.array([0.0, 1.0, 1j])
    b = np.array([1.0, 3.0, 2 + 1j])
    out = integrate_segments(lambda s: s**2, a, b)
    exact = (b**3 - a**3) / 3
    assert np.max(np.abs(out - exact)) < 1e-12


def test_path_is_additive():
    f = lambda s: np.exp(s)
    whole = integrate_path(f, [0, 1 + 1j])
    split = integrate_path(f, [0, 1, 1 + 1j])
    assert abs(whole - split) < 1e-12
    assert abs(whole - (np.exp(1 + 1j) - 1)) < 1e-12


def test_nonconvergence_raises():
    cfg = QuadratureConfig(target_abs_tol=1e-300, max_levels=3)
    with pytest.raises(NonConvergence):
        integrate_segment(lambda s: np.sin(40 * s), 0.0, 10.0, cfg)


@pytest.mark.parametrize("kwargs", [{"target_abs_tol": 0}, {"max_levels": 2},
                                    {"excision_radius": -1.0}])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        QuadratureConfig(**kwargs)


def test_ts_rule_half_line():
    x, w = ts_rule(0.0, math.inf, 5)
    assert abs(np.sum(w * np.exp(-x)) - 1.0) < 1e-10


def test_product_rule_gaussian_on_half_plane():
    z, w = product_rule([-math.inf, 0.0, math.inf], [0.0, math.inf], 5)
    val = np.sum(w * np.exp(-np.abs(z) ** 2))
    assert abs(val - math.pi / 2) < 1e-9


def test_gauss_and_polar_rules():
    x, w = gauss_rule(10)
    assert abs(np.sum(w * x**5) - 1 / 6) < 1e-14
    z, w = polar_rule(1 + 1j, 0.0, 2.0, 16, 32)
    assert abs(np.sum(w) - 4 * math.pi) < 1e-12
    # 1/|z - c| integrates exactly to 2 pi R
    assert abs(np.sum(w / np.abs(z - (1 + 1j))) - 4 * math.pi) < 1e-12


def test_invert_and_pd():
    M = np.array([[2.0, 1.0], [1.0, 3.0]])
    assert np.allclose(invert(M) @ M, np.eye(2))
    assert is_positive_definite(M)
    assert not is_positive_definite(-M)
