import numpy as np
import pytest

from superprop.homotopy import (HomotopyOperator, QuadBudget, SampledForm, bilinear_check,
                                bilinear_matrix, exact_one_form,
                                bump_function, bump_one_form, bump_two_form, cohomology_dims,
                                default_probes, splitting_suite, zero_mode_form)
from superprop.numerics import QuadratureConfig
from superprop.verify import relative_cohomology


@pytest.mark.parametrize("n, dims", [(2, (0, 0, 0)), (3, (0, 0, 0)), (4, (0, 1, 0)),
                                     (5, (0, 1, 0)), (6, (0, 2, 0)), (7, (0, 2, 0)),
                                     (8, (0, 3, 0))])
def test_cohomology_dims(n, dims):
    assert cohomology_dims(n) == dims
    for which in ("s1", "s2"):
        assert relative_cohomology(n, which) == dims


def test_cohomology_rejects_bad_n():
    for n in (1, 2.5):
        with pytest.raises(ValueError):
            cohomology_dims(n)


def test_bump_is_compact_and_smooth():
    f = bump_function(1j, 0.5)
    assert f.value(np.array([1j]))[0] == pytest.approx(1.0)
    assert f.value(np.array([1j + 0.5, 2 + 2j])).tolist() == [0.0, 0.0]
    # exterior derivative against finite differences
    z, h = 1.1 + 1.2j, 1e-6
    fx = (f.value(np.array([z + h])) - f.value(np.array([z - h])))[0] / (2 * h)
    fy = (f.value(np.array([z + 1j * h])) - f.value(np.array([z - 1j * h])))[0] / (2 * h)
    assert abs(f.exterior(np.array([z]))[0] - 0.5 * (fx - 1j * fy)) < 1e-8


def test_bilinear_genus_one(frame4):
    res = bilinear_check(frame4)
    assert np.max(res.residual) < 1e-6


def test_bilinear_genus_two_symmetric_part(frame6):
    res = bilinear_check(frame6)
    assert np.max(res.symmetric_residual) < 1e-5
    # the off-diagonal real antisymmetric part is a genuine feature of the integral
    assert np.max(res.antisymmetric) > 0.1


def test_small_splitting_n2():
    rep = splitting_suite(2, "s1")
    assert rep.max_residual < 5e-3
    assert {p["degree"] for p in rep.probes} == {0, 1, 2}
    assert sum(p["degree"] == 1 for p in rep.probes) == 3


def test_splitting_improves_under_refinement():
    op = HomotopyOperator(3, "s2")
    form = bump_one_form(0.5 + 1.0j, 0.5, direction=1j)
    Q = 0.6 + 1.1j
    coarse = op.splitting_residual(form, Q)
    fine = op.with_budget(op.budget.refined()).splitting_residual(form, Q)
    assert fine < coarse < 5e-3


def test_excision_option_agrees():
    form = bump_two_form(0.2 + 1.0j, 0.6)
    Q = 0.3 + 1.1j
    plain = HomotopyOperator(2, "s1").apply_G(form, Q)
    cut = HomotopyOperator(2, "s1", cfg=QuadratureConfig(excision_radius=0.02)).apply_G(form, Q)
    assert abs(plain - cut) < 1e-4


def test_degree_zero_G_vanishes():
    assert HomotopyOperator(2).apply_G(bump_function(1j, 0.5), 1j) == 0.0
    with pytest.raises(ValueError):
        HomotopyOperator(2).apply_G(bump_two_form(1j, 0.5), 0.5)


def test_projection_fixes_zero_modes(frame4):
    op = HomotopyOperator(4, "s1", frame4)
    phi = zero_mode_form(frame4, 1, "s1")
    for Q in (0.5 + 0.5j, 1.5 + 1.0j):
        val = phi.value(np.array([Q]))[0]
        assert abs(op.project(phi, Q) - val) < 5e-3 * max(1.0, abs(val))


def test_projection_vanishes_for_small_n():
    op = HomotopyOperator(2)
    assert op.project(bump_one_form(1j, 0.4), 1j) == 0


def test_default_probes_shape(frame6):
    probes = default_probes(6, "s2", frame6)
    degrees = [f.degree for f, _ in probes]
    assert degrees.count(0) == 3 and degrees.count(2) == 3 and degrees.count(1) >= 3
    assert all(isinstance(f, SampledForm) and len(pts) >= 2 for f, pts in probes)


def test_budget_refinement():
    b = QuadBudget().refined()
    assert b.patch_nr == 2 * QuadBudget().patch_nr and b.level == QuadBudget().level + 1


def test_projection_kills_exact_forms(frame4):
    op = HomotopyOperator(4, "s2", frame4)
    form = exact_one_form(1.0 + 0.8j, 0.5)
    for Q in (0.5 + 0.5j, 1.5 + 1.0j):
        assert abs(op.project(form, Q)) < 1e-3


def test_projection_idempotent(frame4):
    op = HomotopyOperator(4, "s1", frame4)
    phi = zero_mode_form(frame4, 1, "s1")
    Q = 1.2 + 0.6j
    once = op.project(phi, Q)
    # P phi is a multiple of the zero mode, so P(P phi) = (P phi/phi) P phi
    ratio = once / phi.value(np.array([Q]))[0]
    assert abs(ratio * once - once) < 2 * abs(once - phi.value(np.array([Q]))[0]) + 1e-12


def test_bilinear_matrix_anti_hermitian(frame6):
    M = bilinear_matrix(frame6)
    assert np.max(np.abs(M + M.conj().T)) < 1e-14


def test_bilinear_converges_under_refinement(frame4):
    coarse = np.max(bilinear_check(frame4, level=2).residual)
    fine = np.max(bilinear_check(frame4, level=4).residual)
    assert fine < coarse
