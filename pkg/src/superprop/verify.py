"""Property suites with structured pass/fail reports.

Each suite returns a :class:`VerificationReport` listing every check with
its residual and the tolerance it was held to.  Random probes come from a
seeded generator so reruns are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curve import BranchData, PeriodFrame, abel, build_frame, odd_half_period, riemann_constants
from .homotopy import (HomotopyOperator, QuadBudget, bilinear_check, cohomology_dims,
                       default_probes, zero_mode_form)
from .kernels import KernelEvaluator, brane_sides, kernel, mirror_general, near_diagonal_check
from .numerics import QuadratureConfig
from .theta import (Characteristic, PeriodMatrix, half_period, reduce_mod_lattice, theta,
                    theta_with_characteristic)

__all__ = [
    "CheckResult",
    "VerificationReport",
    "SUITES",
    "default_frame",
    "run_suite",
    "relative_cohomology",
    "random_period_matrix",
    "suite_theta_translations",
    "suite_frame",
    "suite_kontsevich",
    "suite_boundary",
    "suite_reflections",
    "suite_swap",
    "suite_diagonal",
    "suite_zero_set",
    "suite_bilinear",
    "suite_splitting",
    "suite_cohomology",
]

DEFAULT_BRANCH = {4: (0.0, 1.0, 2.0), 6: (0.0, 1.0, 2.0, 3.0, 4.0)}


@dataclass
class CheckResult:
    name: str
    residual: float
    tol: float
    passed: bool
    comparison: str = "<"

    def to_dict(self):
        return {"name": self.name, "residual": self.residual, "tol": self.tol,
                "comparison": self.comparison, "passed": self.passed}


@dataclass
class VerificationReport:
    """Outcome of one suite.  ``passed`` is true iff every check passed."""

    suite: str
    params: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def add(self, name, residual, tol):
        r = float(residual)
        self.checks.append(CheckResult(name, r, float(tol), bool(r < tol)))

    def add_greater(self, name, value, bound):
        v = float(value)
        self.checks.append(CheckResult(name, v, float(bound), bool(v > bound), ">"))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self):
        return {"suite": self.suite, "params": self.params, "passed": self.passed,
                "checks": [c.to_dict() for c in self.checks], "info": self.info}

    def summary_lines(self):
        for c in self.checks:
            flag = "pass" if c.passed else "FAIL"
            yield f"{flag}  {self.suite}/{c.name}: {c.residual:.3e} {c.comparison} {c.tol:.1e}"


def default_frame(n, frame=None, cfg=None):
    """Frame for ``n`` branes: the given one, or a fixed default for n = 4, 6."""
    if n in (2, 3):
        return None
    if frame is not None:
        if 2 * frame.g + 2 != n:
            raise ValueError(f"frame has genus {frame.g}, incompatible with n={n}")
        return frame
    if n not in DEFAULT_BRANCH:
        raise ValueError(f"no default frame for n={n}; pass one explicitly")
    return build_frame(BranchData(DEFAULT_BRANCH[n]), cfg)


def _interior_points(rng, m, frame=None, n=2):
    if frame is None:
        lo, hi = (-3.0, 3.0) if n == 2 else (-2.0, 3.0)
    else:
        x = frame.branch.array
        lo, hi = x[0] - 2.0, x[-1] + 2.0
    return rng.uniform(lo, hi, m) + 1j * rng.uniform(0.05, 3.0, m)


def _wrap(a):
    return np.abs((np.asarray(a) + math.pi) % (2.0 * math.pi) - math.pi)


# --------------------------------------------------------------------------
# theta and frames


def random_period_matrix(rng, g):
    """A random point of the Siegel upper half space with moderate Im part."""
    B = rng.normal(size=(g, g))
    Y = B @ B.T / g + 0.6 * np.eye(g)
    X = rng.uniform(-0.5, 0.5, size=(g, g))
    X = 0.5 * (X + X.T)
    return X + 1j * Y


def suite_theta_translations(seed=0, tol=1e-9, samples=100, cfg=None, **_):
    """Quasi-periodicity, evenness and the characteristic shift identity."""
    rng = np.random.default_rng(seed)
    rep = VerificationReport("theta-translations", {"seed": seed, "samples": samples})
    ttol = cfg.target_abs_tol if cfg else 1e-12
    for g in (1, 2, 3):
        pm = PeriodMatrix(random_period_matrix(rng, g))
        z = rng.uniform(-0.5, 0.5, (samples, g)) + 1j * rng.uniform(-0.5, 0.5, (samples, g))
        mu = rng.integers(-2, 3, (samples, g)).astype(float)
        nu = rng.integers(-2, 3, (samples, g)).astype(float)
        lhs = theta(z + nu + mu @ pm.Omega.T, pm, ttol)
        fac = np.exp(-1j * math.pi * np.einsum("pi,ij,pj->p", mu, pm.Omega, mu)
                     - 2j * math.pi * np.einsum("pi,pi->p", mu, z))
        ref = theta(z, pm, ttol)
        rel = np.abs(lhs - fac * ref) / np.maximum(np.abs(fac * ref), 1e-300)
        rep.add(f"quasi-periodicity g={g}", np.max(rel), tol)
        rel_even = np.abs(theta(-z, pm, ttol) - ref) / np.abs(ref)
        rep.add(f"evenness g={g}", np.max(rel_even), tol)
        e = rng.integers(0, 2, g)
        ep = rng.integers(0, 2, g)
        c = Characteristic(e, ep)
        hp = half_period(c, pm)
        direct = theta_with_characteristic(c, z, pm, ttol)
        shifted = (np.exp(1j * math.pi * (0.25 * e @ pm.Omega @ e + e @ (z + 0.5 * ep).T))
                   * theta(z + hp, pm, ttol))
        rep.add(f"characteristic shift g={g}",
                np.max(np.abs(direct - shifted) / np.maximum(np.abs(shifted), 1e-300)), tol)
    return rep


def suite_frame(frame=None, branch=None, tol=1e-8, cfg=None, **_):
    """Frame invariants, the Riemann-constant cross-check and odd half periods."""
    frames = [frame] if frame is not None else [
        build_frame(BranchData(b), cfg) for b in (branch or [(0, 1, 2), (0, 1, 2, 3, 4),
                                                             (-2, -1, 0, 1, 3)])]
    rep = VerificationReport("frame", {"branch_points": [list(f.branch.x) for f in frames]})
    for fr in frames:
        tag = f"x={list(fr.branch.x)}"
        d = fr.diagnostics
        rep.add(f"{tag} a-periods real", d["a_period_imag"], tol)
        rep.add(f"{tag} Omega purely imaginary", d["omega_real"], tol)
        rep.add(f"{tag} Omega symmetric", d["omega_asymmetry"], tol)
        rep.add_greater(f"{tag} min eigenvalue Im Omega", np.min(np.linalg.eigvalsh(fr.Omega.imag)), 0.0)
        rep.add(f"{tag} half-period table", d["half_period_residual"], tol)
        rep.add(f"{tag} interior routes", d["interior_route_residual"], tol)
        K = riemann_constants(fr)
        odd_sum = fr.half_periods[2:2 * fr.g + 1:2].sum(axis=0)
        rep.add(f"{tag} Riemann constants", np.max(np.abs(reduce_mod_lattice(K - odd_sum, fr.period))),
                tol)
        for j in range(1, fr.g + 1):
            A = odd_half_period(fr, j)
            rep.add(f"{tag} theta(A_{j})", abs(theta(A, fr.period)), 1e-9)
        if fr.g == 1:
            from scipy.special import ellipk
            x1, x2, x3 = fr.branch.x
            m = (x2 - x1) / (x3 - x1)
            agm = ellipk(1.0 - m) / ellipk(m)
            rep.add(f"{tag} AGM oracle", abs(fr.Omega[0, 0] - 1j * agm), tol)
    return rep


# --------------------------------------------------------------------------
# kernels


def suite_kontsevich(seed=0, tol=1e-10, samples=100, **_):
    """Two-brane a1 kernel against the Kontsevich angle form."""
    rng = np.random.default_rng(seed)
    rep = VerificationReport("kontsevich", {"seed": seed, "samples": samples})
    zQ = _interior_points(rng, samples)
    zP = _interior_points(rng, samples)
    k = kernel(zQ, zP, "a1", 2)
    # (1/2pi) d arg[(zP - zQ)/(zP - conj zQ)]
    aP = (1.0 / (zP - zQ) - 1.0 / (zP - np.conj(zQ))) / (4j * math.pi)
    aQ = (-1.0 / (zP - zQ) - np.conj(1.0 / (zP - np.conj(zQ)))) / (4j * math.pi)
    rep.add("a1 vs angle form", max(np.max(np.abs(k.aP - aP)), np.max(np.abs(k.aQ - aQ))), tol)
    return rep


def _side_samples(n, frame, per_side=32, window=3.0):
    for k, (a, b) in enumerate(brane_sides(n, frame), start=1):
        if math.isinf(a):
            a = b - window
        if math.isinf(b):
            b = a + window
        yield k, a + (b - a) * (np.arange(per_side) + 0.5) / per_side


def suite_boundary(n=2, which="s1", frame=None, seed=0, tol=None, cfg=None, **_):
    """Pullbacks of the kernel to the sides carrying Dirichlet conditions.

    With P on a side of parity ``p`` the P-tangential component and the whole
    Q component must vanish; the prescribed parities are odd for P and even
    for Q under S1, reversed under S2.
    """
    frame = default_frame(n, frame, cfg)
    tol = tol or (1e-7 if n in (2, 3) else 1e-6)
    rng = np.random.default_rng(seed)
    rep = VerificationReport("boundary", {"n": n, "which": which, "seed": seed})
    ev = KernelEvaluator(n, which, frame, cfg=cfg)
    partners = _interior_points(rng, 20, frame, n)
    p_parity = 1 if which == "s1" else 0
    for k, pts in _side_samples(n, frame):
        zb = pts[:, None] + 0j
        zi = partners[None, :]
        if k % 2 == p_parity:
            f = ev.forms(zi, zb)
            r = max(np.max(np.abs(f.aP.real)), np.max(np.abs(f.aQ)))
            rep.add(f"P on side {k}", r, tol)
        else:
            f = ev.forms(zb, zi)
            r = max(np.max(np.abs(f.aQ.real)), np.max(np.abs(f.aP)))
            rep.add(f"Q on side {k}", r, tol)
    return rep


def _reflection_table(n, which, g, Om):
    """``(name, map(u, v) -> (u', v'), extra(u, v))`` with psi(u', v') = -psi(u, v) + extra."""
    zero = lambda u, v: 0.0
    if n == 2:
        if which == "s1":
            return [("v -> conj v", lambda u, v: (u, np.conj(v)), zero),
                    ("u -> -conj u", lambda u, v: (-np.conj(u), v), zero)]
        return [("u -> conj u", lambda u, v: (np.conj(u), v), zero),
                ("v -> -conj v", lambda u, v: (u, -np.conj(v)), zero)]
    if n == 3:
        if which == "s1":
            return [("u -> conj u", lambda u, v: (np.conj(u), v), zero),
                    ("u -> conj u + i", lambda u, v: (np.conj(u) + 1j, v), zero),
                    ("v -> -conj v", lambda u, v: (u, -np.conj(v)), zero)]
        return [("v -> conj v", lambda u, v: (u, np.conj(v)), zero),
                ("v -> conj v + i", lambda u, v: (u, np.conj(v) + 1j), zero),
                ("u -> -conj u", lambda u, v: (-np.conj(u), v), zero)]
    e = np.eye(g)
    tau = [Om[:, k] for k in range(g)]
    out = []
    if which == "s2":
        out += [("u -> conj u", lambda u, v: (np.conj(u), v), zero),
                ("v -> -conj v", lambda u, v: (u, -np.conj(v)), zero),
                ("u -> tau1 + conj u", lambda u, v: (tau[0] + np.conj(u), v),
                 lambda u, v: 8 * math.pi * v[..., 0].real),
                ("v -> e1 - conj v", lambda u, v: (u, e[0] - np.conj(v)), zero)]
        for j in range(1, g):
            out.append((f"u -> tau1 + tau{j + 1} + conj u",
                        lambda u, v, j=j: (tau[0] + tau[j] + np.conj(u), v),
                        lambda u, v, j=j: 8 * math.pi * (v[..., 0].real + v[..., j].real)))
            out.append((f"v -> e1+..+e{j + 1} - conj v",
                        lambda u, v, j=j: (u, e[:j + 1].sum(0) - np.conj(v)), zero))
    else:
        out += [("v -> conj v", lambda u, v: (u, np.conj(v)), zero),
                ("u -> -conj u", lambda u, v: (-np.conj(u), v), zero),
                ("v -> tau1 + conj v", lambda u, v: (u, tau[0] + np.conj(v)),
                 lambda u, v: 8 * math.pi * u[..., 0].real),
                ("u -> e1 - conj u", lambda u, v: (e[0] - np.conj(u), v), zero)]
        for j in range(1, g):
            out.append((f"v -> tau1 + tau{j + 1} + conj v",
                        lambda u, v, j=j: (u, tau[0] + tau[j] + np.conj(v)),
                        lambda u, v, j=j: 8 * math.pi * (u[..., 0].real + u[..., j].real)))
            out.append((f"u -> e1+..+e{j + 1} - conj u",
                        lambda u, v, j=j: (e[:j + 1].sum(0) - np.conj(u), v), zero))
    return out


def suite_reflections(n=4, which=None, frame=None, seed=0, tol=1e-7, samples=100, cfg=None, **_):
    """Mirror-map reflection identities mod 2 pi, with the 8 pi Re terms."""
    frame = default_frame(n, frame, cfg)
    rng = np.random.default_rng(seed)
    rep = VerificationReport("reflections", {"n": n, "seed": seed, "samples": samples})
    whiches = [which] if which in ("s1", "s2") else ["s1", "s2"]
    zQ = _interior_points(rng, samples, frame, n)
    zP = _interior_points(rng, samples, frame, n)
    for wh in whiches:
        ev = KernelEvaluator(n, wh, frame, cfg=cfg)
        u, v = ev.u(zP), ev.u(zQ)
        base = ev.psi(u, v)
        Om = frame.Omega if frame is not None else None
        for name, fmap, extra in _reflection_table(n, wh, ev.g, Om):
            u2, v2 = fmap(u, v)
            rep.add(f"{wh}: {name}", np.max(_wrap(ev.psi(u2, v2) + base - extra(u, v))), tol)
        if frame is not None:
            A = ev.A
            if wh == "s2":
                gen = mirror_general(u, v, A, np.conj(A), np.conj(A), A, frame, "s2")
            else:
                gen = mirror_general(u, v, A, -A, -np.conj(A), np.conj(A), frame, "s1")
            spec = ev.ratio(u, v)
            rep.add(f"{wh}: general form vs specialized",
                    np.max(np.abs(gen - spec) / np.abs(spec)), 1e-9)
    if frame is not None and frame.g >= 2:
        # kernels must not depend on which odd half period is used
        for j in range(2, frame.g + 1):
            k1 = kernel(zQ, zP, "s1", n, frame, cfg)
            k2 = kernel(zQ, zP, "s1", n, frame, cfg, A=odd_half_period(frame, j))
            rep.add(f"kernel independent of A (j={j})",
                    max(np.max(np.abs(k1.aP - k2.aP)), np.max(np.abs(k1.aQ - k2.aQ))), tol)
    return rep


def suite_swap(n=2, frame=None, seed=0, tol=None, samples=100, cfg=None, **_):
    """``theta_S1(Q, P) = theta_S2(P, Q)`` componentwise."""
    frame = default_frame(n, frame, cfg)
    tol = tol or (1e-9 if n in (2, 3) else 1e-7)
    rng = np.random.default_rng(seed)
    rep = VerificationReport("swap", {"n": n, "seed": seed, "samples": samples})
    zQ = _interior_points(rng, samples, frame, n)
    zP = _interior_points(rng, samples, frame, n)
    a = kernel(zQ, zP, "s1", n, frame, cfg)
    b = kernel(zP, zQ, "s2", n, frame, cfg)
    rep.add("aQ(S1; Q,P) = aP(S2; P,Q)", np.max(np.abs(a.aQ - b.aP)), tol)
    rep.add("aP(S1; Q,P) = aQ(S2; P,Q)", np.max(np.abs(a.aP - b.aQ)), tol)
    return rep


def suite_diagonal(n=2, which="s1", frame=None, seed=0, tol=1e-6, cfg=None, **_):
    """Near-diagonal behaviour and closedness of the angular part."""
    frame = default_frame(n, frame, cfg)
    rng = np.random.default_rng(seed)
    rep = VerificationReport("diagonal", {"n": n, "which": which, "seed": seed})
    Qs = _interior_points(rng, 3, frame, n)
    Qs = Qs.real + 1j * np.maximum(Qs.imag, 0.5)
    worst = 0.0
    for Q in Qs:
        ang = rng.uniform(0, 2 * math.pi)
        r = 10.0 ** -np.arange(1, 6)
        _, dev, C = near_diagonal_check(Q, Q + r * np.exp(1j * ang), which, n, frame, cfg)
        worst = max(worst, C)
    rep.info["remainder_constant"] = worst
    rep.add("remainder / distance bounded", worst, 1e3)
    if n in (2, 3):
        ev = KernelEvaluator(n, which, frame, cfg=cfg)
        h = 1e-4
        curls = []
        for _ in range(10):
            Q, P = _interior_points(rng, 2, frame, n)
            P = P.real + 1j * max(P.imag, 0.3)

            def form(p):
                return ev.forms(Q, np.array([p]), angular_only=True).aP[0]

            # alpha_x = 2 Re a, alpha_y = -2 Im a; curl = d_x alpha_y - d_y alpha_x
            ax = lambda p: 2.0 * form(p).real
            ay = lambda p: -2.0 * form(p).imag
            curl = ((ay(P + h) - ay(P - h)) - (ax(P + 1j * h) - ax(P - 1j * h))) / (2 * h)
            curls.append(abs(curl))
        rep.add("closed away from the diagonal (FD curl)", max(curls), tol)
    return rep


def suite_zero_set(n=4, which="s1", frame=None, seed=0, n_grid=40, cfg=None, **_):
    """The mirror ratio vanishes only on the diagonal.

    For a few interior Q, ``|ratio(P, Q)|`` over an ``n_grid x n_grid`` grid
    of P (which never contains Q) must stay far above its value at a pair
    1e-6 away from the diagonal; denominators must stay away from zero.
    """
    frame = default_frame(n, frame, cfg)
    rng = np.random.default_rng(seed)
    rep = VerificationReport("zero-set", {"n": n, "which": which, "seed": seed, "grid": n_grid})
    ev = KernelEvaluator(n, which, frame, cfg=cfg)
    x = frame.branch.array
    xs = np.linspace(x[0] - 1.0, x[-1] + 1.0, n_grid)
    ys = np.linspace(0.05, 2.5, n_grid)
    grid = (xs[:, None] + 1j * ys[None, :]).ravel()
    uP = ev.u(grid)
    Qs = _interior_points(rng, 3, frame, n)
    worst_ratio, worst_den = math.inf, math.inf
    for Q in Qs:
        vQ = ev.u(np.array([Q]))
        mags = np.abs(ev.ratio(uP, vQ))
        near = Q + 1e-6 * np.exp(1j * rng.uniform(0, 2 * math.pi))
        m_near = abs(ev.ratio(ev.u(np.array([near])), vQ)[0])
        worst_ratio = min(worst_ratio, np.min(mags) / m_near)
        for sign, _, _, _, _, L in ev._arguments(uP, vQ):
            if sign < 0:
                vals = np.abs(theta(L, frame.period))
                worst_den = min(worst_den, np.min(vals) / np.max(vals))
    rep.add_greater("min grid |ratio| / near-diagonal |ratio|", worst_ratio, 1e3)
    rep.add_greater("min relative |denominator theta|", worst_den, 1e-8)
    return rep


# --------------------------------------------------------------------------
# integrals


def suite_bilinear(frame=None, tol=None, level=5, cfg=None, **_):
    """Half-plane integrals of ``omega_j ^ conj(omega_k)`` against ``tau/2``."""
    frames = [frame] if frame is not None else [
        build_frame(BranchData(DEFAULT_BRANCH[4]), cfg), build_frame(BranchData(DEFAULT_BRANCH[6]), cfg)]
    rep = VerificationReport("bilinear", {"level": level})
    for fr in frames:
        t = tol or (1e-6 if fr.g == 1 else 1e-5)
        res = bilinear_check(fr, level)
        tag = f"g={fr.g} x={list(fr.branch.x)}"
        rep.add(f"{tag} entrywise", np.max(res.residual), t)
        rep.add(f"{tag} symmetric part", np.max(res.symmetric_residual), t)
        rep.info[tag] = {"antisymmetric_part": float(np.max(res.antisymmetric)),
                         "M_re": res.M.real.tolist(), "M_im": res.M.imag.tolist()}
    return rep


def suite_splitting(n=2, which="s1", frame=None, tol=5e-3, cfg=None, budget=None,
                    refine=True, **_):
    """``dG + Gd = I - P`` on probe forms, plus ``P phi = phi`` on zero modes.

    With ``refine`` the suite repeats at one refinement level and checks
    that the worst residual per probe does not grow.
    """
    frame = default_frame(n, frame, cfg)
    budget = budget or QuadBudget()
    rep = VerificationReport("splitting", {"n": n, "which": which,
                                           "budget": [budget.patch_nr, budget.patch_nt,
                                                      budget.disc_nr, budget.disc_nt, budget.level]})
    probes = default_probes(n, which, frame)
    op = HomotopyOperator(n, which, frame, cfg, budget)
    coarse = {}
    for form, pts in probes:
        r = max(op.splitting_residual(form, q) for q in pts)
        coarse[form.name] = r
        rep.add(f"{form.name} (degree {form.degree})", r, tol)
    if frame is not None:
        for k in range(1, frame.g + 1):
            f = zero_mode_form(frame, k, which)
            Q = probes[0][1][0]
            rep.add(f"P {f.name} = {f.name}", abs(op.project(f, Q) - f.value(np.array([Q]))[0]), tol)
    if refine:
        fine = op.with_budget(budget.refined())
        rep.info["refined"] = {}
        for form, pts in probes:
            r = max(fine.splitting_residual(form, q) for q in pts)
            rep.info["refined"][form.name] = r
            rep.add(f"{form.name} refined <= default", r / max(coarse[form.name], 1e-300), 1.0 + 1e-12)
    rep.info["default"] = coarse
    return rep


# --------------------------------------------------------------------------
# cohomology


def relative_cohomology(n: int, which: str = "s1"):
    """Betti numbers of the n-gon relative to its Dirichlet sides.

    Cellular computation: vertices ``0..n-1``, edge ``k`` joins vertices
    ``k-1`` and ``k`` (side ``k``), one 2-cell.  The subcomplex is the union
    of the closed even sides (S1) or odd sides (S2).
    """
    keep = 0 if which == "s1" else 1
    sub_edges = {k for k in range(1, n + 1) if k % 2 == keep}
    sub_verts = set()
    for k in sub_edges:
        sub_verts |= {(k - 1) % n, k % n}
    verts = [v for v in range(n) if v not in sub_verts]
    edges = [k for k in range(1, n + 1) if k not in sub_edges]
    vi = {v: i for i, v in enumerate(verts)}
    d1 = np.zeros((len(verts), len(edges)))
    for j, k in enumerate(edges):
        a, b = (k - 1) % n, k % n
        if b in vi:
            d1[vi[b], j] += 1
        if a in vi:
            d1[vi[a], j] -= 1
    d2 = np.ones((len(edges), 1))  # boundary of the face: every edge once, same orientation
    r1 = np.linalg.matrix_rank(d1) if d1.size else 0
    r2 = np.linalg.matrix_rank(d2) if d2.size else 0
    b0 = len(verts) - r1
    b1 = len(edges) - r1 - r2
    b2 = 1 - r2
    return (int(b0), int(b1), int(b2))


def suite_cohomology(n=2, frame=None, cfg=None, seed=0, **_):
    """Closed-form dimensions against the cellular computation and zero-mode count."""
    rep = VerificationReport("cohomology", {"n": n})
    dims = cohomology_dims(n)
    rep.info["dims"] = list(dims)
    for wh in ("s1", "s2"):
        cell = relative_cohomology(n, wh)
        rep.info[f"cellular_{wh}"] = list(cell)
        rep.add(f"{wh}: closed form vs cellular", float(sum(abs(a - b) for a, b in zip(dims, cell))), 0.5)
    if n % 2 == 0 and n >= 4 and (frame is not None or n in DEFAULT_BRANCH):
        fr = default_frame(n, frame, cfg)
        rng = np.random.default_rng(seed)
        z = _interior_points(rng, 8, fr, n)
        from .curve import differentials
        W = differentials(z, fr)
        rank = np.linalg.matrix_rank(W.T, tol=1e-8)
        rep.add("zero-mode rank vs h1", float(abs(rank - dims[1])), 0.5)
    return rep


SUITES = {
    "theta-translations": suite_theta_translations,
    "frame": suite_frame,
    "kontsevich": suite_kontsevich,
    "boundary": suite_boundary,
    "reflections": suite_reflections,
    "swap": suite_swap,
    "diagonal": suite_diagonal,
    "zero-set": suite_zero_set,
    "bilinear": suite_bilinear,
    "splitting": suite_splitting,
    "cohomology": suite_cohomology,
}


def run_suite(name, **kwargs) -> VerificationReport:
    """Run a suite by name; unknown keyword arguments are ignored by suites."""
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    return fn(**kwargs)
