"""Hyperelliptic curves with real branch points.

The curve is ``w^2 = prod_i (z - x_i)`` with ``2g + 1`` finite real branch
points and one over infinity.  The upper half plane (sheet +) is the
polygon whose sides are the intervals between consecutive branch points.

Conventions
-----------
* ``w`` is the product of principal square roots ``sqrt(z - x_i)``, each
  evaluated on the closed upper half plane (boundary values from above).
  It is positive on ``(x_{2g+1}, inf)``.
* a-cycles encircle the cuts ``[x_{2k-1}, x_{2k}]``; the holomorphic
  differentials ``omega_i = I_ij z^{j-1} / w dz`` are normalized on them.
* b-cycles run through the gaps ``[x_{2k}, x_{2k+1}], ..., [x_{2g}, x_{2g+1}]``;
  their overall orientation is fixed by ``Im Omega_11 > 0``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import (DegenerateTransform, FrameInvariantViolation, MismatchError,
                         NonConvergence, QuadratureFailure, SingularHalfPeriod)
from .numerics import QuadratureConfig, integrate_segments, invert, is_positive_definite
from .theta import (Characteristic, PeriodMatrix, reduce_mod_lattice, theta,
                    theta_gradient)

__all__ = [
    "BranchData",
    "SheetedPoint",
    "PeriodFrame",
    "w_eval",
    "build_frame",
    "abel",
    "differentials",
    "riemann_constants",
    "odd_half_period",
    "half_period_table",
    "moebius_reduce",
    "side_index",
]

FRAME_TOL = 1e-8
_ABEL_CHUNK = 1024


def _sqrt_up(v):
    """Principal square root of a value known to lie in the closed upper half plane."""
    v = np.asarray(v, dtype=complex)
    return np.sqrt(v.real + 1j * np.where(v.imag > 0, v.imag, 0.0))


@dataclass(frozen=True)
class BranchData:
    """Finite branch points ``x_1 < ... < x_{2g+1}`` of a genus-g curve."""

    x: tuple

    def __init__(self, x):
        arr = np.asarray(x, dtype=float).ravel()
        if len(arr) < 3 or len(arr) % 2 == 0:
            raise ValueError("need an odd number (at least 3) of finite branch points")
        if not np.all(np.isfinite(arr)):
            raise ValueError("branch points must be finite")
        if np.any(np.diff(arr) <= 0):
            raise ValueError("branch points must be strictly increasing")
        object.__setattr__(self, "x", tuple(float(v) for v in arr))

    @property
    def g(self) -> int:
        return (len(self.x) - 1) // 2

    @property
    def array(self):
        return np.array(self.x)


@dataclass(frozen=True)
class SheetedPoint:
    """A point of the curve given by its projection and a sheet sign."""

    z: complex
    sheet: int = 1

    def __post_init__(self):
        if self.sheet not in (1, -1):
            raise ValueError("sheet must be +1 or -1")
        z = complex(self.z)
        if not math.isinf(z.real) and z.imag < 0:
            raise ValueError("point must lie in the closed upper half plane")


def w_eval(z, branch: BranchData, sheet: int = 1):
    """Value of ``w`` at points of the closed upper half plane.

    >>> float(w_eval(3.0, BranchData([0, 1, 2])).real) == math.sqrt(6)
    True
    """
    if isinstance(z, SheetedPoint):
        z, sheet = z.z, z.sheet
    z = np.asarray(z, dtype=complex)
    x = branch.array
    out = np.prod(_sqrt_up(z[..., None] - x), axis=-1)
    out = sheet * out
    return out[()] if out.ndim == 0 else out


# --------------------------------------------------------------------------
# integrands with exact endpoint offsets


def _segment_integrand(x, a, b, g):
    """Integrand ``s^{j-1}/w(s)`` (j = 1..g) for segments a -> b.

    Each factor ``s - x_i`` is formed from whichever endpoint is closer, so
    a branch point sitting at an endpoint contributes its offset exactly.
    """
    a = np.asarray(a, dtype=complex)[:, None, None]
    b = np.asarray(b, dtype=complex)[:, None, None]
    xa = a - x
    xb = b - x
    powers = np.arange(g)

    def f(s, da, db):
        near_a = (np.abs(da) <= np.abs(db))[..., None]
        fac = np.where(near_a, xa + da[..., None], xb - db[..., None])
        w = np.prod(_sqrt_up(fac), axis=-1)
        return s[..., None] ** powers / w[..., None]

    return f


def _tail_integrand(x, c, d, g):
    """Integrand for ``int_c^inf`` along the ray ``c + d r``.

    Uses ``s = c + d (1 - t)/t`` on ``t in (0, 1)``; every factor is scaled
    by ``t`` so nothing overflows as ``t -> 0``.
    """
    c = np.asarray(c, dtype=complex)[:, None, None]
    d = np.asarray(d, dtype=complex)[:, None, None]
    cx = c - x
    powers = np.arange(g)

    def f(t, dt0, dt1):
        tt = t.real
        db = dt1.real
        fac = tt[..., None] * cx + d * db[..., None]
        w = np.prod(_sqrt_up(fac), axis=-1)
        ts = tt * c[..., 0] + d[..., 0] * db
        return (d[..., 0][..., None] * ts[..., None] ** powers
                * tt[..., None] ** (g - powers - 1.5) / w[..., None])

    return f


def _raw_segments(x, a, b, g, cfg):
    f = _segment_integrand(x, a, b, g)
    try:
        return integrate_segments(f, a, b, cfg, offsets=True)
    except NonConvergence as exc:
        raise QuadratureFailure(str(exc)) from exc


def _raw_tails(x, c, d, g, cfg):
    c = np.asarray(c, dtype=complex)
    d = np.asarray(d, dtype=complex)
    f = _tail_integrand(x, c, d, g)
    n = len(c)
    try:
        return integrate_segments(f, np.zeros(n), np.ones(n), cfg, offsets=True)
    except NonConvergence as exc:
        raise QuadratureFailure(str(exc)) from exc


# --------------------------------------------------------------------------
# frames


@dataclass(frozen=True)
class PeriodFrame:
    """Period data of a hyperelliptic curve in the fixed homology basis.

    Attributes
    ----------
    branch : BranchData
    I : ndarray, shape (g, g)
        Real normalization matrix; ``omega_i = I_ij z^{j-1}/w dz``.
    period : PeriodMatrix
        Purely imaginary period matrix ``Omega``.
    half_periods : ndarray, shape (2g + 2, g)
        Abel images of the branch points (the last one over infinity),
        as actual values of the continuation through the upper half plane.
    K : ndarray, shape (g,)
        Vector of Riemann constants.
    A_default : ndarray, shape (g,)
        Default odd non-singular half period, in the form
        ``eps'/2 + Omega eps/2`` with entries of ``eps, eps'`` in {0, 1}.
    """

    branch: BranchData
    I: np.ndarray
    period: PeriodMatrix
    half_periods: np.ndarray
    K: np.ndarray
    A_default: np.ndarray
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def g(self) -> int:
        return self.branch.g

    @property
    def Omega(self):
        return self.period.Omega

    @property
    def tau(self):
        """Columns of the period matrix."""
        return self.period.Omega

    def to_json(self) -> str:
        def cvec(v):
            v = np.asarray(v, dtype=complex)
            return [float(t) for t in v.real] + [float(t) for t in v.imag]

        doc = {
            "g": self.g,
            "branch_points": list(self.branch.x),
            "I": [[float(t) for t in row] for row in self.I],
            "Omega_im": [[float(t) for t in row] for row in self.Omega.imag],
            "half_periods": [cvec(row) for row in self.half_periods],
            "K": cvec(self.K),
            "A_default": cvec(self.A_default),
        }
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "PeriodFrame":
        doc = json.loads(text)
        g = int(doc["g"])

        def cvec(v):
            v = np.asarray(v, dtype=float)
            return v[:g] + 1j * v[g:]

        branch = BranchData(doc["branch_points"])
        if branch.g != g:
            raise ValueError("genus does not match the number of branch points")
        Om = 1j * np.asarray(doc["Omega_im"], dtype=float)
        return cls(
            branch=branch,
            I=np.asarray(doc["I"], dtype=float),
            period=PeriodMatrix(Om),
            half_periods=np.array([cvec(r) for r in doc["half_periods"]]),
            K=cvec(doc["K"]),
            A_default=cvec(doc["A_default"]),
        )


def half_period_table(Omega):
    """Closed-form Abel images of the branch points for the fixed homology basis.

    Row ``k - 1`` holds the image of the k-th branch point; the last row is
    the point over infinity.
    """
    Om = np.asarray(Omega.Omega if isinstance(Omega, PeriodMatrix) else Omega)
    g = Om.shape[0]
    e = np.eye(g)
    tau = Om
    rows = [np.zeros(g, dtype=complex), 0.5 * e[0].astype(complex)]
    for k in range(1, g):
        ek = e[:k].sum(axis=0)
        rows.append(0.5 * (ek + tau[:, 0] + tau[:, k]))
        rows.append(0.5 * (ek + e[k] + tau[:, 0] + tau[:, k]))
    rows.append(0.5 * (e.sum(axis=0) + tau[:, 0]))
    rows.append(0.5 * tau[:, 0])
    return np.array(rows)


def _riemann_closed_form(Omega):
    g = Omega.shape[0]
    coeff_e = np.arange(g, 0, -1, dtype=float)
    coeff_t = np.ones(g)
    coeff_t[0] = g
    return 0.5 * (coeff_e + Omega @ coeff_t)


def _characteristic_of(A, pm: PeriodMatrix):
    eps = np.rint(2.0 * (A.imag @ pm.Yinv.T))
    eps_p = np.rint(2.0 * (A - 0.5 * pm.Omega @ eps).real)
    return Characteristic(eps.astype(int), eps_p.astype(int))


def _canonical(c: Characteristic, pm: PeriodMatrix):
    return 0.5 * np.asarray(c.eps_prime, float) + 0.5 * pm.Omega @ np.asarray(c.eps, float)


def build_frame(branch, cfg: QuadratureConfig | None = None) -> PeriodFrame:
    """Compute normalized differentials, period matrix and branch-point images.

    Raises
    ------
    QuadratureFailure
        If a period integral does not converge.
    FrameInvariantViolation
        If realness, symmetry, positivity or half-period checks fail.
    MismatchError
        If the Riemann-constant cross-check fails.
    """
    if not isinstance(branch, BranchData):
        branch = BranchData(branch)
    cfg = cfg or QuadratureConfig()
    x = branch.array
    g = branch.g
    n = len(x)

    # Integrals between consecutive branch points, taken from above.
    pieces = _raw_segments(x, x[:-1], x[1:], g, cfg)            # (2g, g)
    tail = _raw_tails(x, x[-1:], np.ones(1), g, cfg)[0]           # (g,)

    A = 2.0 * pieces[0::2].T                                     # A[j, k]
    scale = np.max(np.abs(A))
    if np.max(np.abs(A.imag)) > FRAME_TOL * max(scale, 1.0):
        raise FrameInvariantViolation("a-periods are not real")
    Inorm = invert(A)
    if np.max(np.abs(Inorm.imag)) > FRAME_TOL * max(np.max(np.abs(Inorm)), 1.0):
        raise FrameInvariantViolation("normalization matrix is not real")
    Inorm = Inorm.real

    G = 2.0 * (pieces[1::2] @ Inorm.T)                          # G[m] gap vectors
    tau = np.cumsum(G[::-1], axis=0)[::-1].T                     # tau[:, k] = sum_{m>=k} G_m
    if tau[0, 0].imag < 0:
        tau = -tau
    if np.max(np.abs(tau.real)) > FRAME_TOL:
        raise FrameInvariantViolation("period matrix is not purely imaginary")
    asym = float(np.max(np.abs(tau - tau.T)))
    if asym > FRAME_TOL:
        raise FrameInvariantViolation(f"period matrix is not symmetric ({asym:.2e})")
    Y = 0.5 * (tau.imag + tau.imag.T)
    if not is_positive_definite(Y):
        raise FrameInvariantViolation("Im Omega is not positive definite")
    pm = PeriodMatrix(1j * Y)

    # Images of the branch points along the real axis from above.
    steps = np.vstack([pieces, tail[None, :]]) @ Inorm.T
    hp = np.vstack([np.zeros((1, g), dtype=complex), np.cumsum(steps, axis=0)])

    closed = half_period_table(pm)
    table_res = max(float(np.max(np.abs(reduce_mod_lattice(hp[k] - closed[k], pm))))
                    for k in range(n + 1))
    if table_res > FRAME_TOL:
        raise FrameInvariantViolation(f"half-period table mismatch ({table_res:.2e})")

    # Second route: arcs through the interior of the half plane.
    arc_vals = _arc_images(x, g, cfg) @ Inorm.T
    arc_res = float(np.max(np.abs(arc_vals - hp[1:])))
    if arc_res > FRAME_TOL:
        raise FrameInvariantViolation(f"interior-path images disagree ({arc_res:.2e})")

    K = _riemann_closed_form(pm.Omega)
    summed = hp[2:2 * g + 1:2].sum(axis=0)
    k_res = float(np.max(np.abs(reduce_mod_lattice(K - summed, pm))))
    if k_res > FRAME_TOL:
        raise MismatchError(f"Riemann constants disagree with summed table ({k_res:.2e})")

    frame = PeriodFrame(branch=branch, I=Inorm, period=pm, half_periods=hp, K=K,
                        A_default=np.zeros(g, dtype=complex))
    A_def = odd_half_period(frame, 1)
    diag = {
        "a_period_imag": float(np.max(np.abs(A.imag))),
        "omega_real": float(np.max(np.abs(tau.real))),
        "omega_asymmetry": asym,
        "half_period_residual": table_res,
        "interior_route_residual": arc_res,
        "riemann_constant_residual": k_res,
        "theta_at_A": float(abs(theta(A_def, pm))),
    }
    return PeriodFrame(branch=branch, I=Inorm, period=pm, half_periods=hp, K=K,
                       A_default=A_def, diagnostics=diag)


def _arc_images(x, g, cfg):
    """Unnormalized images of x_2..x_{2g+1} and infinity via interior paths."""
    ends = x[1:]
    mid = 0.5 * (x[0] + ends) + 0.5j * (ends - x[0])
    first = _raw_segments(x, np.full(len(ends), x[0]), mid, g, cfg)
    second = _raw_segments(x, mid, ends, g, cfg)
    finite = first + second
    h = x[-1] - x[0]
    top = x[0] + 1j * h
    up = _raw_segments(x, np.array([x[0]]), np.array([top]), g, cfg)[0]
    out = _raw_tails(x, np.array([top]), np.ones(1), g, cfg)[0]
    return np.vstack([finite, (up + out)[None, :]])


# --------------------------------------------------------------------------
# Abel map and differentials


def differentials(z, frame: PeriodFrame, sheet: int = 1):
    """Coefficients of the normalized differentials ``omega_i = c_i(z) dz``."""
    z = np.asarray(z, dtype=complex)
    w = w_eval(z, frame.branch, sheet)
    powers = np.arange(frame.g)
    raw = z[..., None] ** powers / np.asarray(w)[..., None]
    return raw @ frame.I.T


def abel(z, frame: PeriodFrame, cfg: QuadratureConfig | None = None, sheet: int = 1):
    """Abel map from the first branch point, for points of the closed upper half plane.

    The integral is taken along a straight segment from the nearest branch
    point (whose image is known), or inward from infinity for far points.
    ``sheet=-1`` returns the image of the conjugate-sheet point.

    Parameters
    ----------
    z : complex or array_like
        Projections; ``inf`` denotes the branch point over infinity.
    """
    if isinstance(z, SheetedPoint):
        z, sheet = z.z, z.sheet
    cfg = cfg or QuadratureConfig()
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    zf = z.ravel()
    g = frame.g
    x = frame.branch.array
    hp = frame.half_periods
    if np.any(zf.imag < 0) and not np.all(np.isinf(zf[zf.imag < 0])):
        raise ValueError("abel expects points in the closed upper half plane")
    out = np.empty((len(zf), g), dtype=complex)

    inf_mask = np.isinf(zf)
    out[inf_mask] = hp[-1]
    center = 0.5 * (x[0] + x[-1])
    spread = max(x[-1] - x[0], 1e-300)
    dist = np.abs(zf[:, None] - x[None, :])
    nearest = np.argmin(np.where(inf_mask[:, None], np.inf, dist), axis=1)
    far = ~inf_mask & (np.abs(zf - center) > 2.0 * spread)
    exact = ~inf_mask & (dist[np.arange(len(zf)), nearest] == 0)
    out[exact] = hp[nearest[exact]]
    near = ~inf_mask & ~far & ~exact

    # chunked so the quadrature node arrays stay small
    for idx in np.array_split(np.nonzero(near)[0], max(1, -(-int(near.sum()) // _ABEL_CHUNK))):
        if len(idx):
            a = x[nearest[idx]]
            vals = _raw_segments(x, a.astype(complex), zf[idx], g, cfg)
            out[idx] = hp[nearest[idx]] + vals @ frame.I.T
    for idx in np.array_split(np.nonzero(far)[0], max(1, -(-int(far.sum()) // _ABEL_CHUNK))):
        if len(idx):
            d = zf[idx] - center
            d = d / np.abs(d)
            vals = _raw_tails(x, zf[idx], d, g, cfg)
            out[idx] = hp[-1] - vals @ frame.I.T
    if sheet == -1:
        out = -out
    return out.reshape(shape + (g,))


def riemann_constants(frame: PeriodFrame):
    """Vector of Riemann constants, checked against the branch-point images.

    Raises
    ------
    MismatchError
        If the closed form and the sum of odd-indexed images differ mod lattice.
    """
    K = _riemann_closed_form(frame.Omega)
    g = frame.g
    summed = frame.half_periods[2:2 * g + 1:2].sum(axis=0)
    res = float(np.max(np.abs(reduce_mod_lattice(K - summed, frame.period))))
    if res > FRAME_TOL:
        raise MismatchError(f"Riemann constants disagree with summed table ({res:.2e})")
    return K


def odd_half_period(frame: PeriodFrame, j: int = 1, grad_threshold: float = 1e-6):
    """Odd half period given by the image of ``x_{2j+1}``.

    Returned in canonical form ``eps'/2 + Omega eps/2`` with entries of
    ``eps, eps'`` in {0, 1}.

    Raises
    ------
    SingularHalfPeriod
        If theta does not vanish there or its gradient is (nearly) zero.
    """
    g = frame.g
    if not 1 <= j <= g:
        raise ValueError(f"j must lie in 1..{g}")
    pm = frame.period
    raw = frame.half_periods[2 * j]
    c = _characteristic_of(raw, pm)
    if c.parity != 1:
        raise SingularHalfPeriod(f"image of x_{2 * j + 1} is not an odd half period")
    A = _canonical(c, pm)
    if float(np.max(np.abs(reduce_mod_lattice(A - raw, pm)))) > FRAME_TOL:
        raise SingularHalfPeriod("image is not a half period")
    val = abs(theta(A, pm))
    grad = np.linalg.norm(theta_gradient(A, pm))
    if val > FRAME_TOL or grad < grad_threshold:
        raise SingularHalfPeriod(
            f"theta={val:.2e}, |grad theta|={grad:.2e} at the half period")
    return A


def characteristic(frame: PeriodFrame, A=None) -> Characteristic:
    """Characteristic of a half period (default: the frame's A_default)."""
    return _characteristic_of(frame.A_default if A is None else np.asarray(A), frame.period)


# --------------------------------------------------------------------------
# odd brane counts and sides


def moebius_reduce(x, j: int, k: int) -> BranchData:
    """Send ``x_k`` to infinity with ``z -> (z - x_j)/(z - x_k)``.

    Parameters
    ----------
    x : sequence of float
        ``2g`` increasing real branch points.
    j, k : int
        1-based indices, ``j != k`` and ``k`` even.

    Returns
    -------
    BranchData
        Sorted images of the remaining points (``x_j`` maps to 0).
    """
    x = np.asarray(x, dtype=float).ravel()
    n = len(x)
    if n < 4 or n % 2:
        raise ValueError("need an even number (at least 4) of branch points")
    if np.any(np.diff(x) <= 0):
        raise ValueError("branch points must be strictly increasing")
    if not (1 <= j <= n and 1 <= k <= n) or j == k:
        raise ValueError("indices must be distinct and within range")
    if k % 2:
        raise ValueError("the point sent to infinity must have an even index")
    rest = np.delete(x, k - 1)
    img = np.sort((rest - x[j - 1]) / (rest - x[k - 1]))
    if np.any(np.diff(img) < 1e-12):
        raise DegenerateTransform("two images coincide")
    return BranchData(img)


def side_index(z, x) -> np.ndarray:
    """Index k of the interval ``C_k = (x_{k-1}, x_k)`` containing real ``z``.

    With ``x_0 = -inf`` and ``x_{len(x)+1} = +inf``; returns values 1..len(x)+1.
    """
    z = np.asarray(z, dtype=float)
    return np.searchsorted(np.asarray(x, dtype=float), z, side="left") + 1
