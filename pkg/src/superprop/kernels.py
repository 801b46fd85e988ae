"""Mirror maps and the kernel 1-forms they generate.

A mirror map is a ratio of products ``prod F(L)^{+-1}`` where each ``L`` is
a linear combination of ``u, conj(u), v, conj(v)`` plus a constant shift,
with ``u`` the image of P and ``v`` the image of Q.  The kernel is
``(1/2 pi) d arg(ratio)`` minus a zero-mode correction, with ``d arg``
evaluated analytically as ``Im(d ratio / ratio)``.

A real 1-form is stored as two complex coefficients ``(aQ, aP)``; its
value is ``2 Re(aQ dz_Q) + 2 Re(aP dz_P)``.  If ``d log(ratio)`` has
``alpha dz + beta conj(dz)`` at one point, the coefficient there is
``(alpha - conj(beta)) / (4 pi i)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curve import PeriodFrame, abel, differentials
from .exceptions import DiagonalSingularity, NonConvergence, QuadratureFailure, ZeroDenominator
from .numerics import QuadratureConfig, integrate_segments, invert
from .theta import theta_log_gradient

__all__ = [
    "IndexSets",
    "KernelForm",
    "BraneSide",
    "relevant_sets",
    "map_u2",
    "map_u3",
    "map_u3_quadrature",
    "mirror2",
    "mirror3",
    "mirror_g",
    "mirror_general",
    "zero_mode_term",
    "kernel",
    "near_diagonal_check",
    "KernelEvaluator",
    "brane_sides",
]

DIAGONAL_EPS = 1e-9
ZERO_EPS = 1e-13
WHICH = ("s1", "s2", "a1", "a2")


# --------------------------------------------------------------------------
# index sets and sides


@dataclass(frozen=True)
class IndexSets:
    """Brane index sets and the two derived relevant sets."""

    m: int
    I: tuple
    S1: frozenset
    S2: frozenset


def relevant_sets(I, m: int) -> IndexSets:
    """Alternating intersections of brane index sets.

    ``S1`` intersects ``I_j`` for even ``j`` and complements for odd ``j``;
    ``S2`` does the opposite.  Indices are 1-based.

    >>> sorted(relevant_sets([{1, 2}, {2, 3}], 3).S1)
    [3]
    """
    I = [frozenset(int(a) for a in s) for s in I]
    if len(I) < 2:
        raise ValueError("need at least two branes")
    full = frozenset(range(1, m + 1))
    for s in I:
        if not s <= full:
            raise ValueError(f"index set {sorted(s)} not contained in 1..{m}")
    S1, S2 = set(full), set(full)
    for j, s in enumerate(I, start=1):
        if j % 2 == 0:
            S1 &= s
            S2 &= full - s
        else:
            S1 &= full - s
            S2 &= s
    return IndexSets(m=m, I=tuple(I), S1=frozenset(S1), S2=frozenset(S2))


@dataclass(frozen=True)
class BraneSide:
    """Side ``k`` of the polygon, the image of ``C_k = (x_{k-1}, x_k)``."""

    n: int
    side_index: int

    @property
    def parity(self) -> str:
        return "even" if self.side_index % 2 == 0 else "odd"


def brane_sides(n: int, frame: PeriodFrame | None = None):
    """Endpoints ``(x_{k-1}, x_k)`` of each side interval in the z-chart."""
    if n == 2:
        x = [0.0]
    elif n == 3:
        x = [0.0, 1.0]
    else:
        if frame is None or 2 * frame.g + 2 != n:
            raise ValueError(f"n={n} needs a frame of genus {(n - 2) // 2}")
        x = list(frame.branch.x)
    ends = [-math.inf] + x + [math.inf]
    return [(ends[k], ends[k + 1]) for k in range(len(ends) - 1)]


# --------------------------------------------------------------------------
# uniformizing maps


def _up(z):
    z = np.asarray(z, dtype=complex)
    return z.real + 1j * np.where(z.imag > 0, z.imag, 0.0)


def map_u2(z):
    """Principal square root, mapping the upper half plane to the first quadrant."""
    out = np.sqrt(_up(z))
    return out[()] if out.ndim == 0 else out


def map_u3(z):
    """Map of the upper half plane onto the strip ``0 <= Im u <= 1/2, Re u >= 0``.

    Closed form ``(1/pi) log(sqrt(z) + sqrt(z - 1))``; sends 1 to 0,
    0 to ``i/2`` and ``(1, inf)`` to the positive reals.
    """
    z = _up(z)
    out = np.log(np.sqrt(z) + np.sqrt(_up(z - 1.0))) / math.pi
    return out[()] if out.ndim == 0 else out


def _du2(z):
    return 0.5 / np.sqrt(_up(z))


def _du3(z):
    z = _up(z)
    return 1.0 / (2.0 * math.pi * np.sqrt(z) * np.sqrt(_up(z - 1.0)))


def map_u3_quadrature(z, cfg: QuadratureConfig | None = None):
    """``(1/2 pi) int_1^z ds / sqrt(s (s - 1))`` by tanh-sinh quadrature.

    Integrates from whichever of 0 and 1 is nearer; the value at 0 is itself
    a quadrature along the interval.  Independent of :func:`map_u3`.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    a = np.where(np.abs(z) < np.abs(z - 1.0), 0.0, 1.0).astype(complex)

    def integrand(a, b):
        a = np.asarray(a, dtype=complex)[:, None]
        b = np.asarray(b, dtype=complex)[:, None]

        def f(s, da, db):
            near = np.abs(da) <= np.abs(db)
            fs = np.where(near, a + da, b - db)
            fs1 = np.where(near, (a - 1.0) + da, (b - 1.0) - db)
            return 1.0 / (np.sqrt(_up(fs)) * np.sqrt(_up(fs1)))

        return f

    one, zero = np.array([1.0 + 0j]), np.array([0j])
    try:
        u0 = integrate_segments(integrand(one, zero), one, zero, cfg, offsets=True)[0]
        vals = np.zeros(len(z), dtype=complex)
        live = z != a
        if np.any(live):
            vals[live] = integrate_segments(integrand(a[live], z[live]), a[live], z[live],
                                            cfg, offsets=True)
    except NonConvergence as exc:
        raise QuadratureFailure(str(exc)) from exc
    out = (np.where(a == 0.0, u0, 0.0) + vals) / (2.0 * math.pi)
    return out[0] if out.shape == (1,) else out


# --------------------------------------------------------------------------
# factor tables: (sign, c_u, c_ubar, c_v, c_vbar, shift-code)
# shift codes: 0 none, "A", "Abar", "-A", "-Abar"

_RATIOS = {
    (2, "s1"): [(1, 1, 0, -1, 0, 0), (1, 0, 1, -1, 0, 0), (-1, 0, 1, 1, 0, 0), (-1, 1, 0, 1, 0, 0)],
    (2, "s2"): [(1, 1, 0, -1, 0, 0), (1, 0, 1, 1, 0, 0), (-1, 0, 1, -1, 0, 0), (-1, 1, 0, 1, 0, 0)],
    (2, "a1"): [(1, 1, 0, -1, 0, 0), (1, 1, 0, 1, 0, 0), (-1, 1, 0, 0, 1, 0), (-1, 1, 0, 0, -1, 0)],
    (2, "a2"): [(1, 1, 0, -1, 0, 0), (1, 1, 0, 1, 0, 0), (-1, 0, 1, -1, 0, 0), (-1, 0, 1, 1, 0, 0)],
    (3, "s1"): [(1, 1, 0, -1, 0, 0), (1, 0, 1, 1, 0, 0), (-1, 0, 1, -1, 0, 0), (-1, 1, 0, 1, 0, 0)],
    (3, "s2"): [(1, 1, 0, -1, 0, 0), (1, 0, 1, -1, 0, 0), (-1, 0, 1, 1, 0, 0), (-1, 1, 0, 1, 0, 0)],
    ("g", "s1"): [(1, 1, 0, -1, 0, "A"), (1, 0, 1, -1, 0, "Abar"),
                  (-1, 1, 0, 1, 0, "-Abar"), (-1, 0, 1, 1, 0, "-A")],
    ("g", "s2"): [(1, 1, 0, -1, 0, "A"), (1, 0, 1, 1, 0, "Abar"),
                  (-1, 1, 0, 1, 0, "Abar"), (-1, 0, 1, -1, 0, "A")],
}


def _check_which(n, which):
    which = which.lower()
    if which not in WHICH:
        raise ValueError(f"unknown index set {which!r}")
    if which in ("a1", "a2") and n != 2:
        raise ValueError("a1/a2 kernels are only defined for n=2")
    if n < 2:
        raise ValueError("n must be at least 2")
    return which


def _shift_vec(code, A, g):
    if code == 0:
        return np.zeros(g, dtype=complex)
    return {"A": A, "Abar": np.conj(A), "-A": -A, "-Abar": -np.conj(A)}[code]


@dataclass
class KernelForm:
    """Kernel 1-form coefficients; the real form is ``2Re(aQ dzQ) + 2Re(aP dzP)``."""

    aQ: np.ndarray
    aP: np.ndarray

    def __iter__(self):
        yield self.aQ
        yield self.aP


class KernelEvaluator:
    """Vectorized evaluation of mirror maps and kernels for fixed ``(n, which)``.

    Parameters
    ----------
    n : int
        Number of branes.  ``n = 2, 3`` use closed forms; even ``n >= 4``
        needs ``frame`` with ``2g + 2 = n``.
    which : {"s1", "s2", "a1", "a2"}
    frame : PeriodFrame, optional
    A : array_like, optional
        Odd half period to use instead of ``frame.A_default``.
    cfg : QuadratureConfig, optional
        Used for the Abel map.
    """

    def __init__(self, n: int, which: str, frame: PeriodFrame | None = None, A=None,
                 cfg: QuadratureConfig | None = None):
        self.which = _check_which(n, which)
        self.n = n
        self.cfg = cfg or QuadratureConfig()
        self.frame = frame
        if n in (2, 3):
            self.kind = "id" if n == 2 else "sin"
            self.g = 1
            self.factors = _RATIOS[(n, self.which)]
            self.A = np.zeros(1, dtype=complex)
        else:
            if n % 2:
                raise ValueError("odd n >= 5 must first be reduced with moebius_reduce")
            if frame is None or 2 * frame.g + 2 != n:
                raise ValueError(f"n={n} needs a frame of genus {(n - 2) // 2}")
            self.kind = "theta"
            self.g = frame.g
            self.factors = _RATIOS[("g", self.which)]
            self.A = np.asarray(frame.A_default if A is None else A, dtype=complex)
            self.O = 4.0 * invert(frame.Omega.imag).real

    # ---- point maps ------------------------------------------------------

    def u(self, z):
        """Image of points z, shape (..., g)."""
        z = np.asarray(z, dtype=complex)
        if self.kind == "id":
            return map_u2(z)[..., None] if z.ndim else np.atleast_1d(map_u2(z))
        if self.kind == "sin":
            return map_u3(z)[..., None] if z.ndim else np.atleast_1d(map_u3(z))
        return abel(z, self.frame, self.cfg)

    def du(self, z):
        """Derivative of the image with respect to z, shape (..., g)."""
        z = np.asarray(z, dtype=complex)
        if self.kind == "id":
            return _du2(z)[..., None]
        if self.kind == "sin":
            return _du3(z)[..., None]
        return differentials(z, self.frame)

    # ---- factor algebra --------------------------------------------------

    def _arguments(self, u, v):
        g = self.g
        out = []
        for sign, cu, cub, cv, cvb, code in self.factors:
            L = (cu * u + cub * np.conj(u) + cv * v + cvb * np.conj(v)
                 + _shift_vec(code, self.A, g))
            out.append((sign, cu, cub, cv, cvb, L))
        return out

    def _log_and_dlog(self, L, need_grad=True):
        """log F(L) and grad log F(L) for the factor function."""
        if self.kind == "id":
            Ls = L[..., 0]
            return np.log(Ls), (1.0 / Ls)[..., None], np.abs(Ls)
        if self.kind == "sin":
            Ls = L[..., 0]
            s = np.sin(1j * math.pi * Ls)
            c = np.cos(1j * math.pi * Ls)
            return np.log(s), (1j * math.pi * c / s)[..., None], np.abs(s)
        lg, dl = theta_log_gradient(L, self.frame.period)
        return lg, dl, None

    def log_ratio(self, u, v):
        """Complex log of the mirror ratio at images ``u, v`` (Im part mod 2 pi)."""
        u = np.asarray(u, dtype=complex)
        v = np.asarray(v, dtype=complex)
        total = 0
        for sign, _, _, _, _, L in self._arguments(u, v):
            lg, _, _ = self._log_and_dlog(L)
            total = total + sign * lg
        return total

    def psi(self, u, v):
        """Mirror-map angle ``arg(ratio)`` reduced to ``(-pi, pi]``."""
        return np.angle(np.exp(1j * self.log_ratio(u, v).imag))

    def ratio(self, u, v):
        return np.exp(self.log_ratio(u, v))

    def _angular(self, u, v, wP, wQ):
        """Coefficients of (1/2pi) d arg(ratio) given images and their z-derivatives."""
        alphaP = betaP = alphaQ = betaQ = 0
        wPc = np.conj(wP)
        wQc = np.conj(wQ)
        for sign, cu, cub, cv, cvb, L in self._arguments(u, v):
            _, dl, mag = self._log_and_dlog(L)
            if mag is not None and np.any(mag < ZERO_EPS):
                raise ZeroDenominator("a mirror-map factor vanished")
            if cu:
                alphaP = alphaP + sign * cu * np.sum(dl * wP, axis=-1)
            if cub:
                betaP = betaP + sign * cub * np.sum(dl * wPc, axis=-1)
            if cv:
                alphaQ = alphaQ + sign * cv * np.sum(dl * wQ, axis=-1)
            if cvb:
                betaQ = betaQ + sign * cvb * np.sum(dl * wQc, axis=-1)
        aP = (alphaP - np.conj(betaP)) / (4j * math.pi)
        aQ = (alphaQ - np.conj(betaQ)) / (4j * math.pi)
        return aQ, aP

    def zero_mode(self, u, v, wP, wQ):
        """Zero-mode correction as ``(aQ, aP)`` with ``O = 4 (Im Omega)^-1``."""
        shape = np.broadcast_shapes(u.shape[:-1], v.shape[:-1])
        if self.kind != "theta":
            z = np.zeros(shape, dtype=complex)
            return z, z.copy()
        if self.which == "s1":
            aP = 0.5 * np.einsum("...i,ij,...j->...", v.imag, self.O, wP)
            return np.zeros(shape, dtype=complex), np.broadcast_to(aP, shape).astype(complex)
        aQ = 0.5 * np.einsum("...i,ij,...j->...", u.imag, self.O, wQ)
        return np.broadcast_to(aQ, shape).astype(complex), np.zeros(shape, dtype=complex)

    def forms(self, zQ, zP, uQ=None, uP=None, wQ=None, wP=None, angular_only=False):
        """Kernel coefficients at pairs ``(zQ, zP)`` (broadcast).

        Precomputed images ``uQ, uP`` and derivatives ``wQ, wP`` may be
        passed to avoid repeated Abel integrals.
        """
        zQ = np.asarray(zQ, dtype=complex)
        zP = np.asarray(zP, dtype=complex)
        if np.any(np.abs(zP - zQ) < DIAGONAL_EPS):
            raise DiagonalSingularity("kernel requested on the diagonal")
        v = self.u(zQ) if uQ is None else np.asarray(uQ)
        u = self.u(zP) if uP is None else np.asarray(uP)
        wq = self.du(zQ) if wQ is None else np.asarray(wQ)
        wp = self.du(zP) if wP is None else np.asarray(wP)
        aQ, aP = self._angular(u, v, wp, wq)
        if not angular_only:
            zq, zp = self.zero_mode(u, v, wp, wq)
            aQ = aQ - zq
            aP = aP - zp
        shape = np.broadcast_shapes(zQ.shape, zP.shape)
        return KernelForm(np.broadcast_to(aQ, shape).copy(), np.broadcast_to(aP, shape).copy())


# --------------------------------------------------------------------------
# functional interface


def _pair(u, v):
    u = np.atleast_1d(np.asarray(u, dtype=complex))
    v = np.atleast_1d(np.asarray(v, dtype=complex))
    return u[..., None], v[..., None]


def mirror2(u, v, which="s1"):
    """Two-brane mirror ratio at first-quadrant images ``u, v``."""
    ev = KernelEvaluator(2, which)
    uu, vv = _pair(u, v)
    if np.any(np.abs(uu - vv) < DIAGONAL_EPS):
        raise DiagonalSingularity("u and v coincide")
    out = ev.ratio(uu, vv)
    return out[0] if out.shape == (1,) else out


def mirror3(u, v, which="s1"):
    """Three-brane mirror ratio at strip images ``u, v``."""
    ev = KernelEvaluator(3, which)
    uu, vv = _pair(u, v)
    if np.any(np.abs(uu - vv) < DIAGONAL_EPS):
        raise DiagonalSingularity("u and v coincide")
    out = ev.ratio(uu, vv)
    return out[0] if out.shape == (1,) else out


def mirror_g(zP, zQ, which, frame: PeriodFrame, A=None, cfg=None):
    """Theta mirror ratio for points of the upper half plane."""
    n = 2 * frame.g + 2
    ev = KernelEvaluator(n, which, frame, A=A, cfg=cfg)
    zP = np.asarray(zP, dtype=complex)
    zQ = np.asarray(zQ, dtype=complex)
    if np.any(np.abs(zP - zQ) < DIAGONAL_EPS):
        raise DiagonalSingularity("P and Q coincide")
    return ev.ratio(ev.u(zP), ev.u(zQ))


def mirror_general(u, v, A, B, C, D, frame: PeriodFrame, which="s2"):
    """Four-theta mirror ratio with independent odd half periods.

    For ``which="s2"`` this is ``theta(u-v+A) theta(ubar+v+B) /
    [theta(u+v+C) theta(ubar-v+D)]``; for ``"s1"`` it is
    ``theta(u-v+A) theta(ubar-v+D) / [theta(u+v+C) theta(ubar+v+B)]``.
    """
    from .theta import log_theta
    pm = frame.period
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    ub = np.conj(u)
    if which == "s2":
        lr = (log_theta(u - v + A, pm) + log_theta(ub + v + B, pm)
              - log_theta(u + v + C, pm) - log_theta(ub - v + D, pm))
    elif which == "s1":
        lr = (log_theta(u - v + A, pm) + log_theta(ub - v + D, pm)
              - log_theta(u + v + C, pm) - log_theta(ub + v + B, pm))
    else:
        raise ValueError("which must be 's1' or 's2'")
    return np.exp(lr)


def zero_mode_term(zQ, zP, which, frame: PeriodFrame, cfg=None) -> KernelForm:
    """Zero-mode part ``Im phi_i(Q) O_ij d Re phi_j(P)`` (S1) or its swap (S2)."""
    n = 2 * frame.g + 2
    ev = KernelEvaluator(n, which, frame, cfg=cfg)
    zQ = np.asarray(zQ, dtype=complex)
    zP = np.asarray(zP, dtype=complex)
    aQ, aP = ev.zero_mode(ev.u(zP), ev.u(zQ), ev.du(zP), ev.du(zQ))
    return KernelForm(aQ, aP)


def kernel(zQ, zP, which="s1", n=2, frame: PeriodFrame | None = None, cfg=None,
           A=None) -> KernelForm:
    """Kernel 1-form ``(1/2pi) d arg(ratio) - Z`` at pairs of points.

    Parameters
    ----------
    zQ, zP : complex or array_like
        Points of the closed upper half plane (broadcast together).
    which : {"s1", "s2", "a1", "a2"}
    n : int
        Number of branes.
    frame : PeriodFrame, optional
        Required for ``n >= 4``.

    Raises
    ------
    DiagonalSingularity
        If ``|zP - zQ| < 1e-9`` anywhere.
    """
    ev = KernelEvaluator(n, which, frame, A=A, cfg=cfg)
    return ev.forms(zQ, zP)


def near_diagonal_check(zQ, zP_seq, which="s1", n=2, frame=None, cfg=None):
    """Remainder of the angular part after removing ``d arg(z_P - z_Q)``.

    Returns ``(dist, remainder, C)``: distances ``|z_P - z_Q|``, the size of
    the remainder's deviation from its extrapolated diagonal limit, and the
    fitted constant with ``remainder <= C * dist``.
    """
    ev = KernelEvaluator(n, which, frame, cfg=cfg)
    zP = np.asarray(zP_seq, dtype=complex)
    zQ = complex(zQ)
    f = ev.forms(zQ, zP, angular_only=True)
    sing = 1.0 / (4j * math.pi * (zP - zQ))
    rem = np.stack([f.aQ + sing, f.aP - sing], axis=-1)
    dist = np.abs(zP - zQ)
    order = np.argsort(dist)
    r0, r1 = dist[order[0]], dist[order[1]]
    # linear extrapolation to zero distance along the approach
    limit = (rem[order[0]] * r1 - rem[order[1]] * r0) / (r1 - r0)
    dev = np.max(np.abs(rem - limit), axis=-1)
    C = float(np.max(dev / dist))
    return dist, dev, C
