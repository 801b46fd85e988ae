"""Double-exponential quadrature and small dense linear algebra.

Every higher module funnels its integrals through the tanh-sinh machinery
here: 1-D segment integrals (vectorized over many segments at once, used
for the Abel map) and tensor-product / polar 2-D rules (used for the
homotopy operators).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from .exceptions import NonConvergence, NotSymmetric, Singular

__all__ = [
    "QuadratureConfig",
    "integrate_segment",
    "integrate_segments",
    "integrate_path",
    "invert",
    "is_positive_definite",
    "ts_rule",
    "product_rule",
    "polar_rule",
    "gauss_rule",
]

# Largest |t| kept; beyond it the endpoint offsets underflow double range.
_TMAX = 6.0
_TMAX_PLAIN = 3.5


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances for the double-exponential rules.

    Parameters
    ----------
    target_abs_tol : float
        Absolute error goal for one segment integral.
    max_levels : int
        Number of step-halvings allowed before giving up.
    excision_radius : float
        Radius of the disc removed around the diagonal singularity in 2-D
        kernel integrals (0 means integrate straight through in polar
        coordinates).
    """

    target_abs_tol: float = 1e-12
    max_levels: int = 8
    excision_radius: float = 0.0

    def __post_init__(self):
        if not self.target_abs_tol > 0:
            raise ValueError("target_abs_tol must be positive")
        if self.max_levels < 3:
            raise ValueError("max_levels must be at least 3")
        if self.excision_radius < 0:
            raise ValueError("excision_radius must be non-negative")


@lru_cache(maxsize=64)
def _level_abscissae(level: int, tmax: float):
    """Parameters t new at ``level`` with their endpoint fractions.

    Level 0 uses step 1; level L adds the odd multiples of 2**-L.  Returns
    ``(sig_a, sig_b, dsdt_unit)`` where ``sig_a = (1 + x)/2`` and
    ``sig_b = (1 - x)/2`` are the exact fractional distances to each end and
    ``dsdt_unit`` is ds/dt for a unit-length interval.
    """
    h = 2.0 ** -level
    if level == 0:
        k = np.arange(-math.floor(tmax), math.floor(tmax) + 1)
        t = k.astype(float)
    else:
        kmax = int(tmax / h)
        k = np.arange(-kmax, kmax + 1)
        k = k[k % 2 != 0]
        t = k * h
    a = 0.5 * math.pi * np.sinh(t)
    sig_a = 1.0 / (1.0 + np.exp(-2.0 * a))
    sig_b = 1.0 / (1.0 + np.exp(2.0 * a))
    dsdt = math.pi * np.cosh(t) * sig_a * sig_b
    keep = (sig_a > 0) & (sig_b > 0) & (dsdt > 0)
    return sig_a[keep], sig_b[keep], dsdt[keep]


def _level_sum(f, a, b, level, offsets, tmax):
    sig_a, sig_b, dsdt = _level_abscissae(level, tmax)
    span = (b - a)[:, None]
    da = span * sig_a[None, :]
    db = span * sig_b[None, :]
    left = (sig_a <= sig_b)[None, :]
    s = np.where(left, a[:, None] + da, b[:, None] - db)
    if offsets:
        vals = f(s, da, db)
    else:
        vals = f(s)
    vals = np.asarray(vals)
    w = span * dsdt[None, :]
    if not offsets:
        # Nodes that rounded onto an endpoint carry no usable information.
        hit = (s == a[:, None]) | (s == b[:, None])
        w = np.where(hit, 0.0, w)
        vals = np.where(hit.reshape(hit.shape + (1,) * (vals.ndim - 2)), 0.0, vals)
    extra = vals.ndim - 2
    w = w.reshape(w.shape + (1,) * extra)
    return np.sum(vals * w, axis=1)


def integrate_segments(f, a, b, cfg: QuadratureConfig | None = None, *,
                       offsets=False, min_level=3, return_error=False):
    """Tanh-sinh integrals of ``f`` over many straight segments at once.

    ``f`` receives a 2-D complex array of nodes with shape (m, k) (and, when
    ``offsets`` is true, the exact displacements ``s - a`` and ``b - s`` as
    two more arrays) and must return an array of shape (m, k) or
    (m, k, ...).  Singularities of type ``(s - a)**-0.5`` at either end are
    integrated to full accuracy when ``offsets`` is used, since the
    integrand then never has to form ``s - a`` by cancellation.

    Refinement halves the step until two successive levels agree to
    ``cfg.target_abs_tol`` for every segment.
    """
    cfg = cfg or QuadratureConfig()
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    b = np.atleast_1d(np.asarray(b, dtype=complex))
    a, b = np.broadcast_arrays(a, b)
    a = a.ravel()
    b = b.ravel()
    tmax = _TMAX if offsets else _TMAX_PLAIN
    total = _level_sum(f, a, b, 0, offsets, tmax)
    err = np.full(total.shape, np.inf)
    for level in range(1, cfg.max_levels + 1):
        h = 2.0 ** -level
        new = 0.5 * total + h * _level_sum(f, a, b, level, offsets, tmax)
        err = np.abs(new - total)
        total = new
        if level >= min_level and np.all(err <= cfg.target_abs_tol):
            break
    else:
        worst = float(np.max(err))
        raise NonConvergence(
            f"tanh-sinh did not reach {cfg.target_abs_tol:g} after "
            f"{cfg.max_levels} levels (last change {worst:.3g})")
    if return_error:
        return total, err
    return total


def integrate_segment(f, a, b, cfg: QuadratureConfig | None = None, *, offsets=False):
    """Integral of ``f`` along the straight segment from ``a`` to ``b``.

    >>> round(integrate_segment(lambda x: x, 0, 1).real, 12)
    0.5
    """
    if offsets:
        g = lambda s, da, db: f(s, da, db)
    else:
        g = f
    val = integrate_segments(g, [a], [b], cfg, offsets=offsets)
    return val[0]


def integrate_path(f, waypoints, cfg: QuadratureConfig | None = None):
    """Sum of segment integrals along a polyline through ``waypoints``."""
    pts = [complex(p) for p in waypoints]
    if len(pts) < 2:
        raise ValueError("a path needs at least two waypoints")
    a = np.array(pts[:-1])
    b = np.array(pts[1:])
    return complex(np.sum(integrate_segments(f, a, b, cfg)))


def invert(M, *, rcond=1e-13):
    """Inverse of a small square matrix via partial-pivot LU.

    Raises :class:`Singular` when the smallest pivot is below
    ``rcond`` times the largest.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    lu, piv = scipy.linalg.lu_factor(M, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if pivots.min() <= rcond * max(pivots.max(), np.finfo(float).tiny):
        raise Singular(f"pivot {pivots.min():.3g} below threshold")
    eye = np.eye(M.shape[0], dtype=lu.dtype)
    return scipy.linalg.lu_solve((lu, piv), eye, check_finite=False)


def is_positive_definite(M, *, sym_tol=1e-10) -> bool:
    """True iff the real symmetric matrix ``M`` admits a Cholesky factor."""
    M = np.asarray(M, dtype=float)
    if np.max(np.abs(M - M.T), initial=0.0) > sym_tol:
        raise NotSymmetric("matrix is not symmetric")
    try:
        np.linalg.cholesky(0.5 * (M + M.T))
    except np.linalg.LinAlgError:
        return False
    return True


# --------------------------------------------------------------------------
# fixed rules for 2-D work


def ts_rule(a: float, b: float, level: int, scale: float = 1.0):
    """Fixed-level tanh-sinh nodes and weights on ``(a, b)``.

    Either end may be infinite; a half-line ``(a, inf)`` uses the
    exp-sinh map ``a + scale * exp(pi/2 sinh t)``.
    """
    h = 2.0 ** -level
    if math.isfinite(a) and math.isfinite(b):
        kmax = int(_TMAX_PLAIN / h)
        t = np.arange(-kmax, kmax + 1) * h
        s_a = 1.0 / (1.0 + np.exp(-math.pi * np.sinh(t)))
        s_b = 1.0 / (1.0 + np.exp(math.pi * np.sinh(t)))
        x = np.where(s_a <= s_b, a + (b - a) * s_a, b - (b - a) * s_b)
        w = h * (b - a) * math.pi * np.cosh(t) * s_a * s_b
        keep = (x > a) & (x < b) & (w > 0)
        return x[keep], w[keep]
    if math.isfinite(a) and b == math.inf:
        lo, hi = -4.5, 4.0
        t = np.arange(math.ceil(lo / h), math.floor(hi / h) + 1) * h
        e = np.exp(0.5 * math.pi * np.sinh(t))
        x = a + scale * e
        w = h * scale * 0.5 * math.pi * np.cosh(t) * e
        keep = (x > a) & np.isfinite(x) & (w > 0)
        return x[keep], w[keep]
    if a == -math.inf and math.isfinite(b):
        x, w = ts_rule(-b, math.inf, level, scale)
        return -x[::-1], w[::-1]
    raise ValueError("unsupported interval")


def product_rule(x_breaks, y_breaks, level: int, scale: float = 1.0):
    """Tensor tanh-sinh rule over a rectangle split at the given breakpoints.

    Breakpoints must be sorted; the outermost ones may be infinite.
    Returns complex nodes ``x + iy`` and real area weights.
    """
    xs, wx = _composite(x_breaks, level, scale)
    ys, wy = _composite(y_breaks, level, scale)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    W = np.outer(wx, wy)
    return (X + 1j * Y).ravel(), W.ravel()


def _composite(breaks, level, scale):
    xs, ws = [], []
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        if hi <= lo:
            continue
        x, w = ts_rule(lo, hi, level, scale)
        xs.append(x)
        ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


@lru_cache(maxsize=32)
def gauss_rule(n: int):
    """Gauss-Legendre nodes and weights on (0, 1)."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def polar_rule(center: complex, r_min: float, r_max: float, n_r: int, n_theta: int):
    """Polar Gauss x trapezoid rule on the annulus ``r_min < |z - c| < r_max``.

    The Jacobian ``r`` is folded into the weights, so integrands with a
    ``1/|z - c|`` singularity become bounded.
    """
    xr, wr = gauss_rule(n_r)
    r = r_min + (r_max - r_min) * xr
    wr = wr * (r_max - r_min) * r
    th = 2.0 * math.pi * (np.arange(n_theta) + 0.5) / n_theta
    R, TH = np.meshgrid(r, th, indexing="ij")
    W = np.outer(wr, np.full(n_theta, 2.0 * math.pi / n_theta))
    return (center + R * np.exp(1j * TH)).ravel(), W.ravel()
