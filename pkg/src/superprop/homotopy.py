"""Kernel integral operators, the zero-mode projection and the splitting check.

Forms on the upper half plane are sampled pointwise:

* degree 0: a real function ``f``;
* degree 1: a complex coefficient ``c`` for the real form ``2 Re(c dz)``;
* degree 2: a real density ``rho`` for ``rho dx ^ dy``.

With those conventions ``(G phi)(Q)`` for a 1-form is the real number
``int 4 Im(aP conj(c)) dA`` and for a 2-form the 1-form coefficient
``int aQ rho dA``; the outer ``d`` is a central difference in Q.

Every 2-D integral is split with a smooth partition of unity: a polar patch
around Q absorbs the ``1/|P - Q|`` singularity (Gauss in r, trapezoid in
angle), and the remainder goes to a fixed global rule (polar over a
compact support, or tensor tanh-sinh over the whole half plane with
breakpoints at the branch points).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curve import PeriodFrame, differentials
from .kernels import KernelEvaluator
from .numerics import QuadratureConfig, polar_rule, product_rule

__all__ = [
    "SampledForm",
    "QuadBudget",
    "HomotopyOperator",
    "bump_function",
    "bump_one_form",
    "exact_one_form",
    "bump_two_form",
    "zero_mode_form",
    "bilinear_matrix",
    "bilinear_check",
    "BilinearResult",
    "cohomology_dims",
    "splitting_suite",
    "default_probes",
    "SplittingReport",
]


# --------------------------------------------------------------------------
# sampled forms


@dataclass
class SampledForm:
    """A differential form given by pointwise evaluators.

    Attributes
    ----------
    degree : int
    value : callable
        ``z -> f`` (degree 0, real), ``z -> c`` (degree 1) or ``z -> rho``
        (degree 2), vectorized over arrays of points.
    exterior : callable or None
        Pointwise ``d`` of the form in the same conventions (degree 0 gives
        the coefficient ``df/dz``; degree 1 gives the density of ``d phi``).
        ``None`` means ``d`` of the form vanishes.
    support : tuple (center, radius) or None
        Closed disc containing the support; ``None`` for global forms.
    boundary_flags : str
        Parity of the sides on which the form's pullback vanishes.
    name : str
    """

    degree: int
    value: object
    exterior: object = None
    support: tuple | None = None
    boundary_flags: str = "all"
    name: str = ""


def _bump(z, c, R):
    """``exp(1 - 1/(1 - s^2))`` with ``s = |z - c|/R``; returns value and ``(z - c)`` factor."""
    d = np.asarray(z, dtype=complex) - c
    s2 = (d.real ** 2 + d.imag ** 2) / R ** 2
    inside = s2 < 1.0
    q = np.where(inside, 1.0 - s2, 1.0)
    b = np.where(inside, np.exp(1.0 - 1.0 / q), 0.0)
    # grad b (as the complex number b_x + i b_y) = k (z - c)
    k = np.where(inside, -2.0 * b / (R ** 2 * q ** 2), 0.0)
    return b, k, d, q, inside


def bump_function(center, radius, amplitude=1.0, name="bump"):
    """Degree-0 smooth bump compactly supported in a disc."""
    c = complex(center)

    def value(z):
        return amplitude * _bump(z, c, radius)[0]

    def exterior(z):
        _, k, d, _, _ = _bump(z, c, radius)
        # df/dz = (f_x - i f_y)/2 with grad = k d
        return amplitude * 0.5 * k * np.conj(d)

    return SampledForm(0, value, exterior, (c, radius), "all", name)


def bump_one_form(center, radius, direction=1.0, amplitude=1.0, name="bump-1form"):
    """Degree-1 form ``b (cos t dx + sin t dy)`` with ``direction = exp(i t)``.

    Not closed; its ``d`` is ``(cos t b_y - sin t b_x)`` with a sign:
    ``d(A dx + B dy) = (B_x - A_y) dx ^ dy``.
    """
    c = complex(center)
    e = complex(direction) / abs(complex(direction))
    ca, sa = e.real, e.imag

    def value(z):
        b = _bump(z, c, radius)[0]
        # A dx + B dy = 2 Re(coef dz) with coef = (A - i B)/2
        return amplitude * 0.5 * b * (ca - 1j * sa)

    def exterior(z):
        _, k, d, _, _ = _bump(z, c, radius)
        bx, by = (k * d).real, (k * d).imag
        return amplitude * (sa * bx - ca * by)

    return SampledForm(1, value, exterior, (c, radius), "all", name)


def exact_one_form(center, radius, amplitude=1.0, name="exact-1form"):
    """Degree-1 exact form ``d b`` of a bump."""
    f = bump_function(center, radius, amplitude)
    return SampledForm(1, f.exterior, None, f.support, "all", name)


def bump_two_form(center, radius, amplitude=1.0, name="bump-2form"):
    """Degree-2 form ``b dx ^ dy``."""
    c = complex(center)

    def value(z):
        return amplitude * _bump(z, c, radius)[0]

    return SampledForm(2, value, None, (c, radius), "all", name)


def zero_mode_form(frame: PeriodFrame, k: int, which="s1", name=None):
    """Harmonic zero mode ``d Im phi_k`` (S1) or ``d Re phi_k`` (S2), k 1-based."""
    if not 1 <= k <= frame.g:
        raise ValueError(f"k must lie in 1..{frame.g}")

    def value(z):
        w = differentials(np.asarray(z, dtype=complex), frame)[..., k - 1]
        # d Re phi = 2 Re(w/2 dz); d Im phi = 2 Re(w/(2i) dz)
        return w / 2j if which == "s1" else w / 2.0

    flags = "even" if which == "s1" else "odd"
    label = name or (f"dIm_phi{k}" if which == "s1" else f"dRe_phi{k}")
    return SampledForm(1, value, None, None, flags, label)


# --------------------------------------------------------------------------
# quadrature budget and rules


@dataclass(frozen=True)
class QuadBudget:
    """Node counts for the 2-D rules.

    ``patch_*`` size the polar patch around Q, ``disc_*`` the polar rule over
    a compact support, ``level`` the tensor tanh-sinh rule on the half plane.
    """

    patch_nr: int = 48
    patch_nt: int = 48
    disc_nr: int = 64
    disc_nt: int = 96
    level: int = 4

    def refined(self) -> "QuadBudget":
        return QuadBudget(self.patch_nr * 2, self.patch_nt * 2, self.disc_nr * 2,
                          self.disc_nt * 2, self.level + 1)


def _cutoff(r, rho):
    """Smooth partition function: 1 for r <= rho/2, 0 for r >= rho."""
    t = np.clip((np.asarray(r) - 0.5 * rho) / (0.5 * rho), 0.0, 1.0)

    def h(s):
        return np.where(s > 0, np.exp(-1.0 / np.where(s > 0, s, 1.0)), 0.0)

    return h(1.0 - t) / (h(1.0 - t) + h(t))


class _Nodes:
    """Fixed nodes with cached images under the uniformizing map."""

    def __init__(self, z, w, ev: KernelEvaluator):
        self.z = z
        self.w = w
        self.u = ev.u(z)
        self.du = ev.du(z)


class HomotopyOperator:
    """Quadrature realization of G, its exterior derivative and the projection P.

    Parameters
    ----------
    n : int
        Number of branes (2, 3 or even n >= 4 with a frame).
    which : {"s1", "s2"}
    frame : PeriodFrame, optional
    cfg : QuadratureConfig, optional
        ``excision_radius > 0`` switches the patch to excised annuli with
        Richardson extrapolation in the radius.
    budget : QuadBudget, optional
    """

    def __init__(self, n, which="s1", frame: PeriodFrame | None = None,
                 cfg: QuadratureConfig | None = None, budget: QuadBudget | None = None):
        if which not in ("s1", "s2"):
            raise ValueError("homotopy operators exist for s1 and s2 only")
        self.n = n
        self.which = which
        self.frame = frame
        self.cfg = cfg or QuadratureConfig()
        self.budget = budget or QuadBudget()
        self.ev = KernelEvaluator(n, which, frame, cfg=self.cfg)
        if n == 2:
            self.singular = np.array([0.0])
        elif n == 3:
            self.singular = np.array([0.0, 1.0])
        else:
            self.singular = frame.branch.array
        self._global = {}

    # ---- rules -----------------------------------------------------------

    def _patch_radius(self, Q):
        d_sing = np.min(np.abs(Q - self.singular))
        return 0.5 * min(Q.imag, d_sing)

    def _halfplane_nodes(self):
        key = ("H", self.budget.level)
        if key not in self._global:
            x = self.singular
            spread = max(float(x[-1] - x[0]), 1.0)
            xb = [-math.inf] + list(x) + [math.inf]
            z, w = product_rule(xb, [0.0, math.inf], self.budget.level, scale=spread)
            keep = z.imag > 0
            self._global[key] = _Nodes(z[keep], w[keep], self.ev)
        return self._global[key]

    def _disc_nodes(self, support):
        c, R = support
        key = ("D", c, R, self.budget.disc_nr, self.budget.disc_nt)
        if key not in self._global:
            z, w = polar_rule(c, 0.0, R, self.budget.disc_nr, self.budget.disc_nt)
            self._global[key] = _Nodes(z, w, self.ev)
        return self._global[key]

    def _global_nodes(self, form: SampledForm):
        return self._halfplane_nodes() if form.support is None else self._disc_nodes(form.support)

    def _patch(self, Q, mu=0.0):
        rho = self._patch_radius(Q)
        z, w = polar_rule(Q, mu, rho, self.budget.patch_nr, self.budget.patch_nt)
        return z, w * _cutoff(np.abs(z - Q), rho), rho

    # ---- operator pieces -------------------------------------------------

    def _integrand(self, form, Q, zP, uP, wP):
        """Density (degree 1 -> real) or coefficient density (degree 2 -> complex)."""
        f = self.ev.forms(Q, zP, uP=uP, wP=wP, uQ=self._uQ, wQ=self._wQ)
        if form.degree == 1:
            c = form.value(zP)
            return 4.0 * np.imag(f.aP * np.conj(c))
        if form.degree == 2:
            return f.aQ * form.value(zP)
        raise ValueError("G acts on forms of degree 1 or 2")

    def _apply_once(self, form, Q, mu):
        zp, wp, rho = self._patch(Q, mu)
        if form.support is not None:
            c, R = form.support
            live = np.abs(zp - c) < R
            zp, wp = zp[live], wp[live]
        total = 0.0
        if len(zp):
            total = np.sum(wp * self._integrand(form, Q, zp, None, None))
        nodes = self._global_nodes(form)
        chi = _cutoff(np.abs(nodes.z - Q), rho)
        weight = nodes.w * (1.0 - chi)
        live = weight > 0
        vals = self._integrand(form, Q, nodes.z[live], nodes.u[live], nodes.du[live])
        return total + np.sum(weight[live] * vals)

    def apply_G(self, form: SampledForm, Q):
        """``(G phi)(Q)``: real for 1-forms, a 1-form coefficient for 2-forms."""
        Q = complex(Q)
        if Q.imag <= 0:
            raise ValueError("G is evaluated at interior points")
        if form.degree == 0:
            return 0.0
        self._uQ = self.ev.u(np.array([Q]))[0]
        self._wQ = self.ev.du(np.array([Q]))[0]
        mu = self.cfg.excision_radius
        if mu <= 0:
            return self._apply_once(form, Q, 0.0)
        # excised patch: error is O(mu^2) because the 1/r part averages out
        i1 = self._apply_once(form, Q, mu)
        i2 = self._apply_once(form, Q, 0.5 * mu)
        return (4.0 * i2 - i1) / 3.0

    def d_of(self, func, Q, scale=None):
        """Exterior derivative of a scalar or 1-form-valued function of Q.

        Central differences with step ``1e-4 * scale`` and one Richardson
        step.  Scalars give a 1-form coefficient; 1-form coefficients give
        a 2-form density.
        """
        Q = complex(Q)
        h = 1e-4 * (scale if scale is not None else max(Q.imag, 1e-3))

        def grad(step):
            fx = (func(Q + step) - func(Q - step)) / (2 * step)
            fy = (func(Q + 1j * step) - func(Q - 1j * step)) / (2 * step)
            return fx, fy

        gx1, gy1 = grad(h)
        gx2, gy2 = grad(0.5 * h)
        gx = (4 * gx2 - gx1) / 3
        gy = (4 * gy2 - gy1) / 3
        if np.iscomplexobj(gx):
            # 1-form 2 Re(c dz): a_x = 2 Re c, a_y = -2 Im c
            return -2.0 * np.imag(gx) - 2.0 * np.real(gy)
        return 0.5 * (np.real(gx) - 1j * np.real(gy))

    def project(self, form: SampledForm, Q):
        """Zero-mode projection ``(P phi)(Q)`` of a 1-form (zero for n = 2, 3)."""
        Q = complex(Q)
        if form.degree != 1 or self.n < 4:
            return 0.0 + 0.0j if form.degree == 1 else 0.0
        g = self.frame.g
        nodes = self._global_nodes(form)
        c = form.value(nodes.z)
        w = nodes.du  # normalized differentials at nodes
        if self.which == "s1":
            # int dRe u_j ^ phi with dRe u_j = 2 Re(w_j/2 dz)
            ints = np.array([np.sum(nodes.w * 4.0 * np.imag(0.5 * w[:, j] * np.conj(c)))
                             for j in range(g)])
            wQ = self.ev.du(np.array([Q]))[0]
            dIm = wQ / 2j
            return np.sum(dIm * (self.ev.O @ ints))
        ints = np.array([np.sum(nodes.w * 4.0 * np.imag(w[:, j] / 2j * np.conj(c)))
                         for j in range(g)])
        wQ = self.ev.du(np.array([Q]))[0]
        dRe = wQ / 2.0
        return -np.sum(dRe * (self.ev.O @ ints))

    def splitting_residual(self, form: SampledForm, Q):
        """``|(dG + Gd) phi - (I - P) phi|`` at Q, in the sampled conventions."""
        Q = complex(Q)
        if form.degree == 0:
            # only G(df) contributes; P vanishes on functions
            df = SampledForm(1, form.exterior, None, form.support)
            return float(abs(self.apply_G(df, Q) - form.value(np.array([Q]))[0]))
        if form.degree == 1:
            dG = self.d_of(lambda q: self.apply_G(form, q), Q)
            Gd = 0.0
            if form.exterior is not None:
                two = SampledForm(2, form.exterior, None, form.support)
                Gd = self.apply_G(two, Q)
            phi = form.value(np.array([Q]))[0]
            return float(abs(dG + Gd - phi + self.project(form, Q)))
        if form.degree == 2:
            dG = self.d_of(lambda q: self.apply_G(form, q), Q)
            return float(abs(dG - form.value(np.array([Q]))[0]))
        raise ValueError("degree must be 0, 1 or 2")

    def with_budget(self, budget: QuadBudget) -> "HomotopyOperator":
        return HomotopyOperator(self.n, self.which, self.frame, self.cfg, budget)


# --------------------------------------------------------------------------
# bilinear relations and cohomology


def bilinear_matrix(frame: PeriodFrame, level: int = 5):
    """``M_jk = int omega_j ^ conj(omega_k)`` over the upper half plane.

    Uses the standard orientation ``dx ^ dy`` of the z-chart, in which
    ``dz ^ conj(dz) = -2i dx ^ dy``.
    """
    x = frame.branch.array
    spread = max(float(x[-1] - x[0]), 1.0)
    xb = [-math.inf] + list(x) + [math.inf]
    z, w = product_rule(xb, [0.0, math.inf], level, scale=spread)
    keep = z.imag > 0
    z, w = z[keep], w[keep]
    c = differentials(z, frame)
    return -2j * np.einsum("p,pj,pk->jk", w, c, np.conj(c))


@dataclass
class BilinearResult:
    """Comparison of the half-plane integrals with half the period matrix.

    Attributes
    ----------
    residual : ndarray
        Entrywise ``|L_jk - tau_jk / 2|`` with ``L = -M`` (the orientation in
        which the diagonal carries the sign of the closed form).
    symmetric_residual : ndarray
        Same for the symmetric part ``(L + L^T)/2``.
    antisymmetric : ndarray
        ``|(M - M^T)/2|``, a real part that the closed form does not carry.
    M : ndarray
        ``int omega_j ^ conj(omega_k)`` in the standard orientation.
    """

    residual: np.ndarray
    symmetric_residual: np.ndarray
    antisymmetric: np.ndarray
    M: np.ndarray


def bilinear_check(frame: PeriodFrame, level: int = 5) -> BilinearResult:
    """Residuals of the bilinear relation ``int omega_j ^ conj(omega_k) = tau_jk / 2``.

    In the standard orientation of the z-chart the diagonal comes out as
    ``-tau_jj / 2``, so the comparison uses the reversed orientation.  For
    genus >= 2 the half-plane integral also has a real antisymmetric part;
    it cancels over the four copies of the polygon that make up the curve
    and is reported separately.
    """
    M = bilinear_matrix(frame, level)
    L = -M
    half = 0.5 * frame.Omega
    return BilinearResult(np.abs(L - half), np.abs(0.5 * (L + L.T) - half),
                          np.abs(0.5 * (M - M.T)), M)


def cohomology_dims(n: int):
    """Dimensions ``(h0, h1, h2)`` of the relative de Rham cohomology."""
    if int(n) != n or n < 2:
        raise ValueError("n must be an integer >= 2")
    n = int(n)
    h1 = (n - 2) // 2 if n % 2 == 0 else (n - 3) // 2
    return (0, h1, 0)


# --------------------------------------------------------------------------
# suite


@dataclass
class SplittingReport:
    """Residuals of ``dG + Gd = I - P`` per probe form."""

    suite: str
    n: int
    which: str
    probes: list = field(default_factory=list)
    quadrature: dict = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return max((p["max_residual"] for p in self.probes), default=0.0)

    def to_dict(self):
        return {"suite": self.suite, "n": self.n, "which": self.which,
                "probes": self.probes, "quadrature": self.quadrature}


def default_probes(n, which="s1", frame=None):
    """Three probes per degree plus zero modes for n >= 4, with probe points."""
    if n == 2:
        c0, c1, c2 = 0.3 + 1.2j, -0.8 + 1.5j, 1.0 + 1.0j
    elif n == 3:
        c0, c1, c2 = 0.5 + 1.2j, -0.6 + 1.4j, 1.6 + 1.0j
    else:
        x = frame.branch.array
        mid = 0.5 * (x[0] + x[-1])
        sp = max(x[-1] - x[0], 1.0)
        c0, c1, c2 = mid + 0.6j * sp, mid - 0.4 * sp + 0.7j * sp, mid + 0.45 * sp + 0.5j * sp
    R = [0.6, 0.5, 0.45]
    if n >= 4:
        R = [r * max(frame.branch.array[-1] - frame.branch.array[0], 1.0) for r in R]
    cs = [c0, c1, c2]
    probes = []
    for i, (c, r) in enumerate(zip(cs, R)):
        pts = [c, c + 0.3 * r, c - 0.25j * r]
        probes.append((bump_function(c, r, name=f"bump0_{i}"), pts))
    probes.append((bump_one_form(cs[0], R[0], 1.0, name="bump1_dx"), [cs[0], cs[0] + 0.3 * R[0]]))
    probes.append((bump_one_form(cs[1], R[1], 1j, name="bump1_dy"), [cs[1], cs[1] - 0.2 * R[1]]))
    probes.append((exact_one_form(cs[2], R[2], name="exact1"), [cs[2], cs[2] + 0.25j * R[2]]))
    for i, (c, r) in enumerate(zip(cs, R)):
        probes.append((bump_two_form(c, r, name=f"bump2_{i}"), [c, c + 0.3 * r]))
    if n >= 4:
        for k in range(1, frame.g + 1):
            probes.append((zero_mode_form(frame, k, which), [cs[0], cs[2]]))
    return probes


def splitting_suite(n, which="s1", frame=None, probes=None, cfg=None, budget=None,
                    suite="splitting") -> SplittingReport:
    """Evaluate ``dG + Gd - (I - P)`` residuals for every probe form."""
    op = HomotopyOperator(n, which, frame, cfg, budget)
    probes = probes if probes is not None else default_probes(n, which, frame)
    report = SplittingReport(suite=suite, n=n, which=which,
                             quadrature={"levels": [op.budget.level],
                                         "patch": [op.budget.patch_nr, op.budget.patch_nt],
                                         "disc": [op.budget.disc_nr, op.budget.disc_nt],
                                         "excision_radii": [op.cfg.excision_radius]})
    for form, pts in probes:
        res = [op.splitting_residual(form, q) for q in pts]
        report.probes.append({"name": form.name, "degree": form.degree,
                              "max_residual": float(max(res)),
                              "points": [[float(complex(q).real), float(complex(q).imag), float(r)]
                                         for q, r in zip(pts, res)]})
    return report
