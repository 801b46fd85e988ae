"""Riemann theta functions with a certified lattice truncation.

Values are computed after reducing the argument into the fundamental
parallelogram: with ``z = z' + Omega k + m`` the quasi-periodicity factor
is applied analytically, and the remaining lattice sum only ever sees
``Im z'`` of order one.  The truncation radius comes from a Gaussian tail
bound in the metric of ``Im Omega`` so the dropped mass is below ``tol``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma, gammaincc

from .exceptions import NotSymmetric, TailBoundFailure
from .numerics import invert, is_positive_definite

__all__ = [
    "PeriodMatrix",
    "Characteristic",
    "theta",
    "theta_with_characteristic",
    "theta_gradient",
    "log_theta",
    "theta_log_gradient",
    "half_period",
    "reduce_mod_lattice",
]

DEFAULT_TOL = 1e-12
RADIUS_CAP = 40.0
MAX_LATTICE_POINTS = 400_000
_CHUNK = 4096


def _tail_bound(R, g, rho):
    """Upper bound on the Gaussian mass outside radius R for lattice minimum rho."""
    x = (R - rho / 2.0) ** 2
    return 0.5 * g * (2.0 / rho) ** g * gamma(g / 2.0) * gammaincc(g / 2.0, x)


class PeriodMatrix:
    """A point of the Siegel upper half space together with its lattice data.

    Parameters
    ----------
    Omega : array_like, shape (g, g)
        Complex symmetric matrix with positive definite imaginary part.

    Raises
    ------
    NotSymmetric
        If ``Omega`` is not symmetric to 1e-10.
    ValueError
        If ``Im Omega`` is not positive definite.
    """

    def __init__(self, Omega):
        Om = np.atleast_2d(np.asarray(Omega, dtype=complex))
        if Om.ndim != 2 or Om.shape[0] != Om.shape[1]:
            raise ValueError("period matrix must be square")
        if not np.all(np.isfinite(Om)):
            raise ValueError("period matrix has non-finite entries")
        if np.max(np.abs(Om - Om.T)) > 1e-10:
            raise NotSymmetric("period matrix is not symmetric")
        Om = 0.5 * (Om + Om.T)
        if not is_positive_definite(Om.imag):
            raise ValueError("imaginary part of the period matrix is not positive definite")
        self.Omega = Om
        self.g = Om.shape[0]
        self.Y = Om.imag.copy()
        self.Yinv = invert(self.Y).real
        # T^T T = pi Y, so each summand has modulus exp(-|T (N + c)|^2).
        self.T = np.linalg.cholesky(math.pi * self.Y).T
        self.rho = self._shortest_vector()
        self._cache = {}

    def __repr__(self):
        return f"PeriodMatrix(g={self.g})"

    def _shortest_vector(self):
        T = self.T
        g = self.g
        L = min(np.linalg.norm(T[:, i]) for i in range(g))
        Tinv = np.linalg.inv(T)
        bounds = [int(math.floor(L * np.linalg.norm(Tinv[i, :]))) for i in range(g)]
        if np.prod([2 * b + 1 for b in bounds]) > 10 ** 6:
            raise TailBoundFailure("lattice too skewed for shortest-vector search")
        best = L
        for N in itertools.product(*[range(-b, b + 1) for b in bounds]):
            if any(N):
                best = min(best, float(np.linalg.norm(T @ np.array(N, dtype=float))))
        return best

    def radius(self, tol):
        """Smallest truncation radius whose tail bound is below ``tol``."""
        g, rho = self.g, self.rho
        R = rho / 2.0 + math.sqrt(g / 2.0)
        while _tail_bound(R, g, rho) >= tol:
            R += 0.05
            if R > RADIUS_CAP:
                raise TailBoundFailure(f"truncation radius exceeds cap {RADIUS_CAP}")
        return R

    def lattice(self, tol, shift=None, extra_radius=0.0):
        """Integer vectors N kept in the sum, plus ``pi i (N+s) Omega (N+s)``."""
        s = np.zeros(self.g) if shift is None else np.asarray(shift, dtype=float)
        key = (float(tol), tuple(s), float(extra_radius))
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        R = self.radius(tol) + extra_radius
        # Covers every N with |T(N + s + c)| <= R for reduced offsets |c_i| <= 1/2.
        delta = sum(np.linalg.norm(self.T[:, i]) * (0.5 + abs(s[i])) for i in range(self.g))
        Tinv = np.linalg.inv(self.T)
        reach = R + delta
        bounds = [int(math.ceil(reach * np.linalg.norm(Tinv[i, :]))) for i in range(self.g)]
        if np.prod([2 * b + 1 for b in bounds], dtype=float) > 50 * MAX_LATTICE_POINTS:
            raise TailBoundFailure("lattice enumeration exceeds the configured cap")
        axes = [np.arange(-b, b + 1) for b in bounds]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, self.g)
        norms = np.linalg.norm(grid @ self.T.T, axis=1)
        N = grid[norms <= reach].astype(float)
        if len(N) > MAX_LATTICE_POINTS:
            raise TailBoundFailure("lattice enumeration exceeds the configured cap")
        Ns = N + s
        quad = math.pi * 1j * np.einsum("mi,ij,mj->m", Ns, self.Omega, Ns)
        self._cache[key] = (Ns, quad)
        return Ns, quad


def _as_pm(Omega):
    return Omega if isinstance(Omega, PeriodMatrix) else PeriodMatrix(Omega)


@dataclass(frozen=True)
class Characteristic:
    """Theta characteristic ``[eps, eps']`` with entries reduced mod 2."""

    eps: tuple
    eps_prime: tuple

    def __init__(self, eps, eps_prime):
        e = tuple(int(v) % 2 for v in np.atleast_1d(eps))
        ep = tuple(int(v) % 2 for v in np.atleast_1d(eps_prime))
        if len(e) != len(ep):
            raise ValueError("characteristic halves must have equal length")
        object.__setattr__(self, "eps", e)
        object.__setattr__(self, "eps_prime", ep)

    @property
    def parity(self) -> int:
        return int(np.dot(self.eps, self.eps_prime)) % 2


def half_period(c: Characteristic, Omega):
    """The point ``eps'/2 + Omega eps/2`` associated with a characteristic."""
    pm = _as_pm(Omega)
    return 0.5 * np.asarray(c.eps_prime, float) + 0.5 * pm.Omega @ np.asarray(c.eps, float)


def _lattice_sum(z, pm: PeriodMatrix, tol, shift=None, extra_radius=0.0, grad=False):
    """Reduced evaluation of the (shifted) theta series at many points.

    Returns ``(logfac, S, dS)`` with value ``exp(logfac) * S`` and
    log-gradient ``dS / S`` (only when ``grad``).
    """
    z = np.asarray(z, dtype=complex)
    g = pm.g
    if g == 1 and (z.ndim == 0 or z.shape[-1] != 1):
        z = z[..., None]
    if z.ndim == 0 or z.shape[-1] != g:
        raise ValueError(f"argument must have trailing dimension {g}")
    shape = z.shape[:-1]
    zf = z.reshape(-1, g)
    s = np.zeros(g) if shift is None else np.asarray(shift, dtype=float)
    Ns, quad = pm.lattice(tol, s, extra_radius)
    Om = pm.Omega

    k = np.rint(zf.imag @ pm.Yinv.T)
    zr = zf - k @ Om.T
    m = np.rint(zr.real)
    zr = zr - m
    c = zr.imag @ pm.Yinv.T
    peak = math.pi * np.einsum("pi,ij,pj->p", c, pm.Y, c)
    # theta_s(z) = exp(-2 pi i (k.z' + k Om k / 2) + 2 pi i s.m) theta_s(z')
    logfac = (-2j * math.pi * (np.einsum("pi,pi->p", k, zr)
                               + 0.5 * np.einsum("pi,ij,pj->p", k, Om, k))
              + 2j * math.pi * (m @ s) + peak)
    S = np.empty(len(zf), dtype=complex)
    dS = np.empty((len(zf), g), dtype=complex) if grad else None
    for lo in range(0, len(zf), _CHUNK):
        hi = min(lo + _CHUNK, len(zf))
        E = quad[None, :] + 2j * math.pi * (zr[lo:hi] @ Ns.T) - peak[lo:hi, None]
        terms = np.exp(E)
        S[lo:hi] = terms.sum(axis=1)
        if grad:
            dS[lo:hi] = 2j * math.pi * (terms @ Ns) / S[lo:hi, None] - 2j * math.pi * k[lo:hi]
    logfac = logfac.reshape(shape)
    S = S.reshape(shape)
    if grad:
        dS = dS.reshape(shape + (g,))
    return logfac, S, dS


def theta(z, Omega, tol=DEFAULT_TOL, extra_radius=0.0):
    """Riemann theta function.

    Parameters
    ----------
    z : array_like, shape (..., g)
        Evaluation points.  For ``g = 1`` a scalar or 1-D array is accepted.
    Omega : PeriodMatrix or array_like
        Period matrix.
    tol : float
        Bound on the dropped lattice mass relative to the dominant term.
    extra_radius : float
        Added to the certified truncation radius (for convergence checks).

    Returns
    -------
    complex or ndarray

    Examples
    --------
    >>> round(theta(0.0, [[1j]]).real, 10)
    1.0864348112
    """
    pm = _as_pm(Omega)
    logfac, S, _ = _lattice_sum(z, pm, tol, extra_radius=extra_radius)
    out = np.exp(logfac) * S
    return out[()] if np.ndim(out) == 0 else out


def log_theta(z, Omega, tol=DEFAULT_TOL):
    """Complex logarithm of theta (imaginary part only meaningful mod 2 pi)."""
    pm = _as_pm(Omega)
    logfac, S, _ = _lattice_sum(z, pm, tol)
    out = logfac + np.log(S)
    return out[()] if np.ndim(out) == 0 else out


def theta_gradient(z, Omega, tol=DEFAULT_TOL):
    """Gradient of theta with respect to ``z``, shape (..., g)."""
    pm = _as_pm(Omega)
    logfac, S, dlog = _lattice_sum(z, pm, tol * 1e-2, grad=True)
    return (np.exp(logfac) * S)[..., None] * dlog


def theta_log_gradient(z, Omega, tol=DEFAULT_TOL):
    """Return ``(log theta, grad theta / theta)`` evaluated together."""
    pm = _as_pm(Omega)
    logfac, S, dlog = _lattice_sum(z, pm, tol * 1e-2, grad=True)
    return logfac + np.log(S), dlog


def theta_with_characteristic(c: Characteristic, z, Omega, tol=DEFAULT_TOL):
    """Theta function with characteristic, summed directly over the shifted lattice.

    Computes ``sum_N exp(2 pi i (1/2 (N + e/2) Omega (N + e/2)
    + (N + e/2).(z + e'/2)))``.
    """
    pm = _as_pm(Omega)
    s = 0.5 * np.asarray(c.eps, dtype=float)
    if len(s) != pm.g:
        raise ValueError("characteristic length does not match genus")
    zz = np.asarray(z, dtype=complex)
    if pm.g == 1 and (zz.ndim == 0 or zz.shape[-1] != 1):
        zz = zz[..., None]
    zeta = zz + 0.5 * np.asarray(c.eps_prime, dtype=float)
    logfac, S, _ = _lattice_sum(zeta, pm, tol, shift=s)
    out = np.exp(logfac) * S
    return out[()] if np.ndim(out) == 0 else out


def reduce_mod_lattice(d, Omega):
    """Representative of ``d`` modulo the period lattice ``Z^g + Omega Z^g``.

    Returns the vector ``d - Omega m - n`` with ``m, n`` the nearest integers,
    which is small exactly when ``d`` is (close to) a lattice vector.
    """
    pm = _as_pm(Omega)
    d = np.asarray(d, dtype=complex)
    m = np.rint(d.imag @ pm.Yinv.T)
    r = d - m @ pm.Omega.T
    return r - np.rint(r.real)
