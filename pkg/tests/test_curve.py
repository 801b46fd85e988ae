import json

import numpy as np
import pytest
from scipy.special import ellipk

from superprop.curve import (BranchData, PeriodFrame, abel, build_frame, differentials,
                             odd_half_period,
                             riemann_constants, w_eval)
from superprop.theta import reduce_mod_lattice, theta


@pytest.mark.parametrize("x", [[0, 1, 2], [-1.0, 0.3, 4.0], [0, 0.1, 10]])
def test_agm_oracle(x):
    fr = build_frame(BranchData(x))
    m = (x[1] - x[0]) / (x[2] - x[0])
    assert abs(fr.Omega[0, 0] - 1j * ellipk(1 - m) / ellipk(m)) < 1e-10


@pytest.mark.parametrize("x", [[0, 1, 2], [0, 1, 2, 3, 4], [-2, -1, 0, 1, 3]])
def test_frame_invariants(x):
    fr = build_frame(BranchData(x))
    assert np.max(np.abs(np.imag(fr.I))) < 1e-8
    assert np.max(np.abs(fr.Omega.real)) < 1e-8
    assert np.max(np.abs(fr.Omega - fr.Omega.T)) < 1e-8
    assert np.min(np.linalg.eigvalsh(fr.Omega.imag)) > 0
    for val in fr.diagnostics.values():
        assert val < 1e-8


def test_bad_branch_points():
    for x in ([0, 1], [0, 2, 1], [0, 1, np.inf]):
        with pytest.raises(ValueError):
            BranchData(x)


def test_branch_images_match_half_periods(frame6):
    x = frame6.branch.array
    u = abel(x + 0j, frame6)
    for k in range(len(x)):
        res = reduce_mod_lattice(u[k] - frame6.half_periods[k], frame6.period)
        assert np.max(np.abs(res)) < 1e-8


def test_abel_base_point_and_batching(frame4, rng):
    assert np.max(np.abs(abel(np.array([0.0 + 0j]), frame4))) < 1e-12
    z = rng.uniform(-2, 4, 7) + 1j * rng.uniform(0.05, 3, 7)
    batch = abel(z, frame4)
    single = np.array([abel(np.array([zz]), frame4)[0] for zz in z])
    assert np.max(np.abs(batch - single)) < 1e-12


def test_abel_derivative_is_normalised_differential(frame6):
    z0, h = 1.3 + 0.7j, 1e-5
    fd = (abel(np.array([z0 + h]), frame6)[0] - abel(np.array([z0 - h]), frame6)[0]) / (2 * h)
    w = w_eval(np.array([z0]), frame6.branch)[0]
    raw = z0 ** np.arange(frame6.g) / w
    assert np.max(np.abs(differentials(np.array([z0]), frame6)[0] - frame6.I @ raw)) < 1e-14
    exact = frame6.I @ raw
    assert np.max(np.abs(fd - exact)) < 1e-7


@pytest.mark.parametrize("fixture", ["frame4", "frame6"])
def test_odd_half_periods_vanish(fixture, request):
    fr = request.getfixturevalue(fixture)
    for j in range(1, fr.g + 1):
        assert abs(theta(odd_half_period(fr, j), fr.period)) < 1e-9
    riemann_constants(fr)


def test_json_round_trip(frame6):
    text = frame6.to_json()
    back = PeriodFrame.from_json(text)
    assert np.allclose(back.Omega, frame6.Omega, atol=0, rtol=0)
    assert json.loads(back.to_json()) == json.loads(text)
