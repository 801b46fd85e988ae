import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from superprop.exceptions import DiagonalSingularity
from superprop.kernels import (KernelEvaluator, brane_sides, kernel, map_u2, map_u3,
                               map_u3_quadrature, mirror2, mirror_g, near_diagonal_check,
                               relevant_sets, zero_mode_term)


def _pts(rng, m, lo=-2.0, hi=4.0):
    return rng.uniform(lo, hi, m) + 1j * rng.uniform(0.05, 3.0, m)


def test_u3_closed_form_against_quadrature(rng):
    z = _pts(rng, 20)
    assert np.max(np.abs(map_u3(z) - map_u3_quadrature(z))) < 1e-10


def test_uniformizer_special_values():
    assert abs(map_u3(0.0) - 0.5j) < 1e-15
    assert abs(map_u3(1.0)) < 1e-15
    assert abs(map_u2(-1.0) - 1j) < 1e-15
    assert map_u3(5.0).imag == pytest.approx(0.0, abs=1e-15)


def test_uniformizer_images(rng):
    z = _pts(rng, 200)
    u2, u3 = map_u2(z), map_u3(z)
    assert np.all(u2.real > 0) and np.all(u2.imag > 0)
    assert np.all((u3.imag > 0) & (u3.imag < 0.5) & (u3.real > -1e-15))


@pytest.mark.parametrize("I, m, S1, S2", [
    ([{1, 2}, {2, 3}], 3, {3}, {1}),
    ([{1}, {1}], 2, set(), set()),
    ([set(), {1, 2}], 2, {1, 2}, set()),
    ([{1}, {2}, {1, 3}, {2}], 3, {2}, {1}),
])
def test_relevant_sets_examples(I, m, S1, S2):
    r = relevant_sets(I, m)
    assert r.S1 == frozenset(S1) and r.S2 == frozenset(S2)
    assert not r.S1 & r.S2


def test_relevant_sets_rejects_bad_input():
    with pytest.raises(ValueError):
        relevant_sets([{1}], 2)
    with pytest.raises(ValueError):
        relevant_sets([{1}, {4}], 3)


def test_brane_sides(frame4):
    assert brane_sides(2) == [(-math.inf, 0.0), (0.0, math.inf)]
    assert len(brane_sides(3)) == 3
    assert len(brane_sides(4, frame4)) == 4
    with pytest.raises(ValueError):
        brane_sides(6, frame4)


def test_kontsevich_reduction(rng):
    zQ, zP = _pts(rng, 50), _pts(rng, 50)
    f = kernel(zQ, zP, "a1", 2)
    refQ = (-1 / (zP - zQ) - np.conj(1 / (zP - np.conj(zQ)))) / (4j * math.pi)
    assert np.max(np.abs(f.aQ - refQ)) < 1e-12


def test_mirror_on_diagonal_raises(frame4):
    with pytest.raises(DiagonalSingularity):
        mirror2(0.5 + 0.5j, 0.5 + 0.5j)
    with pytest.raises(DiagonalSingularity):
        kernel(1 + 1j, 1 + 1j, "s1", 3)
    with pytest.raises(DiagonalSingularity):
        mirror_g(np.array([1 + 1j]), np.array([1 + 1j]), "s1", frame4)


def test_mirror_trivial_examples():
    u = 0.4 + 0.9j
    r1 = mirror2(u, 0.7 + 0.2j, "s1")
    r2 = mirror2(u, 0.7 + 0.2j, "s2")
    assert np.isfinite(r1) and np.isfinite(r2) and r1 != r2
    # the ratio blows up or vanishes only at the diagonal
    near = mirror2(u, u + 1e-7, "s1")
    assert min(abs(near), 1 / abs(near)) < 1e-5


def test_evaluator_validation(frame4):
    with pytest.raises(ValueError):
        KernelEvaluator(3, "a1")
    with pytest.raises(ValueError):
        KernelEvaluator(5, "s1", frame4)
    with pytest.raises(ValueError):
        KernelEvaluator(4, "s1")
    with pytest.raises(ValueError):
        KernelEvaluator(2, "bogus")


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_swap(n, rng, frame4, frame6):
    fr = {4: frame4, 6: frame6}.get(n)
    zQ, zP = _pts(rng, 30), _pts(rng, 30)
    a = kernel(zQ, zP, "s1", n, fr)
    b = kernel(zP, zQ, "s2", n, fr)
    tol = 1e-9 if n < 4 else 1e-7
    assert np.max(np.abs(a.aQ - b.aP)) < tol
    assert np.max(np.abs(a.aP - b.aQ)) < tol


def test_zero_mode_example(frame4, rng):
    zQ, zP = _pts(rng, 10), _pts(rng, 10)
    ev = KernelEvaluator(4, "s1", frame4)
    z = zero_mode_term(zQ, zP, "s1", frame4)
    v, w = ev.u(zQ), ev.du(zP)
    expect = 0.5 * np.einsum("ki,ij,kj->k", v.imag, ev.O, w)
    assert np.max(np.abs(z.aQ)) < 1e-15
    assert np.max(np.abs(z.aP - expect)) < 1e-12
    # the full kernel is the angular part minus this term
    full = ev.forms(zQ, zP)
    ang = ev.forms(zQ, zP, angular_only=True)
    assert np.max(np.abs(ang.aP - full.aP - z.aP)) < 1e-12


def test_zero_mode_genus_one_scalar(frame4):
    # g = 1: O = 4 / Im tau
    ev = KernelEvaluator(4, "s2", frame4)
    assert ev.O.shape == (1, 1)
    assert abs(ev.O[0, 0] - 4.0 / frame4.Omega[0, 0].imag) < 1e-12


def test_kernel_independent_of_half_period_choice(frame6, rng):
    from superprop.curve import odd_half_period
    zQ, zP = _pts(rng, 20, 0, 4), _pts(rng, 20, 0, 4)
    k1 = kernel(zQ, zP, "s1", 6, frame6)
    k2 = kernel(zQ, zP, "s1", 6, frame6, A=odd_half_period(frame6, 2))
    assert np.max(np.abs(k1.aP - k2.aP)) < 1e-7


@pytest.mark.parametrize("n", [2, 3])
def test_near_diagonal_remainder_bounded(n):
    Q = 0.3 + 0.8j
    zP = Q + np.geomspace(1e-2, 1e-6, 9) * np.exp(0.7j)
    dist, dev, C = near_diagonal_check(Q, zP, "s1", n)
    assert np.all(np.isfinite(dev)) and C < 1e3


_coord = st.floats(-3.0, 3.0, allow_nan=False)
_height = st.floats(0.05, 3.0, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(n=st.sampled_from([2, 3]), a=_coord, b=_height, c=_coord, d=_height)
def test_swap_property(n, a, b, c, d):
    zQ, zP = complex(a, b), complex(c, d)
    assume(abs(zQ - zP) > 1e-3)
    s1 = kernel(zQ, zP, "s1", n)
    s2 = kernel(zP, zQ, "s2", n)
    scale = max(1.0, abs(s1.aQ), abs(s1.aP))
    assert abs(s1.aQ - s2.aP) < 1e-9 * scale and abs(s1.aP - s2.aQ) < 1e-9 * scale


@settings(max_examples=60, deadline=None)
@given(n=st.sampled_from([2, 3]), which=st.sampled_from(["s1", "s2"]), a=_coord, c=_coord,
       d=_height)
def test_boundary_pullback_property(n, which, a, c, d):
    # on the real axis the tangential component of one of the two legs vanishes
    x = a if abs(a) > 1e-3 and abs(a - 1) > 1e-3 else a + 0.01
    sides = brane_sides(n)
    k = next(i for i, (lo, hi) in enumerate(sides, start=1) if lo < x < hi)
    f = kernel(complex(x, 0.0), complex(c, d), which, n)
    # 2 Re(a dz) restricted to dz = dx
    q_leg, p_leg = 2 * f.aQ.real, 2 * kernel(complex(c, d), complex(x, 0.0), which, n).aP.real
    odd_dirichlet = (which == "s1")
    leg = p_leg if (k % 2 == 1) == odd_dirichlet else q_leg
    assert abs(leg) < 1e-7 * max(1.0, abs(f.aQ), abs(f.aP))
