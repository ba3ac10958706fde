"""Pointwise kernels on the unit disk: h, q, the Moebius map, P_alpha, G_alpha."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy.integrate import quad

from .core import (
    DIAGONAL_EPS,
    DomainError,
    SingularityError,
    _alpha,
    _scalar_out,
    as_points,
    one_minus_abs2,
)

TWO_PI = 2.0 * np.pi
_CHEB_DEG = 48


@dataclass(frozen=True)
class GreenEvalConfig:
    c_alpha: float = 1.0

    def __post_init__(self):
        if not self.c_alpha > 0:
            raise DomainError("c_alpha must be positive")


# ---------------------------------------------------------------------------
# h(r) = 1/2 int_0^{1-r^2} t^alpha / (1-t) dt
#
# Split at x = 1/2.  Below, int_0^x t^a/(1-t) = x^(a+1) T(x) with
# T(x) = sum_n x^n / (n+a+1), analytic on |x| < 1.  Above,
#   int_0^x = A - log 2 - log(1-x) + R(x),  A = int_0^{1/2} t^a/(1-t) dt,
#   R(x) = int_{1/2}^x (t^a-1)/(1-t) dt,
# and R is analytic near [1/2, 1].  T and R are replaced by Chebyshev
# interpolants built once per alpha.


def _series_T(x, a, nterms=90):
    n = np.arange(nterms)[::-1]
    out = np.zeros_like(x)
    for k in n:
        out = out * x + 1.0 / (k + a + 1.0)
    return out


def _remainder_R(x, a, nodes=48):
    t, wt = np.polynomial.legendre.leggauss(nodes)
    x = np.asarray(x, dtype=float)
    half = 0.5 * (x - 0.5)
    tt = 0.5 + np.multiply.outer(half, t + 1.0)
    f = np.expm1(a * np.log(tt)) / (1.0 - tt)
    return half * (f @ wt)


@lru_cache(maxsize=64)
def _h_tables(a: float):
    t_low = C.Chebyshev.interpolate(lambda x: _series_T(x, a), _CHEB_DEG, domain=[0.0, 0.5])
    r_high = C.Chebyshev.interpolate(lambda x: _remainder_R(x, a), _CHEB_DEG, domain=[0.5, 1.0])
    const = 0.5 ** (a + 1.0) * float(_series_T(np.array(0.5), a)) - np.log(2.0)
    return t_low, r_high, const


def _h_core(x, log_q, a):
    """h given x = 1 - q^2 and log q (both arrays, q in (0, 1])."""
    x = np.asarray(x, dtype=float)
    log_q = np.asarray(log_q, dtype=float)
    t_low, r_high, const = _h_tables(float(a))
    out = np.empty(np.broadcast(x, log_q).shape)
    x, log_q = np.broadcast_arrays(x, log_q)
    low = x <= 0.5
    if np.any(low):
        xl = x[low]
        out[low] = 0.5 * xl ** (a + 1.0) * t_low(xl)
    high = ~low
    if np.any(high):
        xh = x[high]
        out[high] = 0.5 * (const + r_high(xh)) - log_q[high]
    return out


def h_alpha(r, a):
    """h(r) = 1/2 * int_0^{1-r^2} t^alpha/(1-t) dt for r in (0, 1]."""
    alpha = _alpha(a)
    r = np.asarray(r, dtype=float)
    if np.any(~np.isfinite(r)) or np.any(r <= 0.0) or np.any(r > 1.0):
        raise DomainError("h_alpha needs 0 < r <= 1")
    x = (1.0 - r) * (1.0 + r)
    return _scalar_out(_h_core(x, np.log(r), alpha))


def h_alpha_quad(r, a, abs_tol=1e-13):
    """Reference value of h(r) by adaptive quadrature of the log-split form."""
    alpha = _alpha(a)
    r = float(r)
    if not 0.0 < r <= 1.0:
        raise DomainError("h_alpha needs 0 < r <= 1")
    x = (1.0 - r) * (1.0 + r)
    if x <= 0.5:
        # no log split needed away from r = 0, and it would cancel badly near r = 1
        val, _ = quad(lambda t: t ** alpha / (1.0 - t), 0.0, x, epsabs=0.0, epsrel=1e-13)
        return 0.5 * val

    def bounded(t):
        return np.expm1(alpha * np.log(t)) / (1.0 - t) if t > 0 else -1.0

    rem, _ = quad(bounded, 0.0, x, epsabs=abs_tol, epsrel=1e-12, limit=400)
    return -np.log(r) + 0.5 * rem


# ---------------------------------------------------------------------------


def pseudo_hyperbolic(z, w):
    """q(z, w) = |z - w| / |1 - conj(w) z|."""
    z, w = as_points(z, "z"), as_points(w, "w")
    return _scalar_out(np.abs(z - w) / np.abs(1.0 - np.conj(w) * z))


def one_minus_q2(z, w):
    """1 - q(z,w)^2 via (1-|z|^2)(1-|w|^2)/|1 - conj(w) z|^2 (no cancellation)."""
    return one_minus_abs2(z) * one_minus_abs2(w) / np.abs(1.0 - np.conj(w) * z) ** 2


def mobius(w, z):
    """phi_w(z) = (w - z) / (1 - conj(w) z); an involution of the disk."""
    z, w = as_points(z, "z"), as_points(w, "w")
    return _scalar_out((w - z) / (1.0 - np.conj(w) * z))


def poisson_kernel_alpha(z, a):
    """P_alpha(z) = (1-|z|^2)^(alpha+1) / ((1-z)(1-conj z)^(alpha+1))."""
    alpha = _alpha(a)
    z = as_points(z)
    val = one_minus_abs2(z) ** (alpha + 1.0) / ((1.0 - z) * (1.0 - np.conj(z)) ** (alpha + 1.0))
    return _scalar_out(val)


def v_kernel(w, theta, a):
    """Kernel of the boundary integral for v, at z = exp(i theta)."""
    alpha = _alpha(a)
    w = as_points(w, "w")
    z = np.exp(1j * np.asarray(theta, dtype=float))
    val = one_minus_abs2(w) ** (alpha + 1.0) / (
        (1.0 - z * np.conj(w)) * (1.0 - np.conj(z) * w) ** (alpha + 1.0)
    )
    return _scalar_out(val)


def _green_raw(z, w, alpha):
    """G_alpha on arrays already known to be in the disk; no diagonal check."""
    dz = np.abs(z - w)
    den = 1.0 - np.conj(w) * z
    x = one_minus_abs2(z) * one_minus_abs2(w) / np.abs(den) ** 2
    h = _h_core(x, np.log(dz) - np.log(np.abs(den)), alpha)
    if alpha == 0.0:
        return h / TWO_PI + 0j
    return (1.0 - np.conj(z) * w) ** alpha * h / TWO_PI


def _check_off_diagonal(z, w):
    if np.any(np.abs(z - w) < DIAGONAL_EPS):
        raise SingularityError("Green function evaluated on the diagonal z = w")


def green_alpha(z, w, a):
    """G_alpha(z, w) = (1 - conj(z) w)^alpha h(q(z, w)) / 2pi (principal branch)."""
    alpha = _alpha(a)
    z, w = as_points(z, "z"), as_points(w, "w")
    _check_off_diagonal(z, w)
    return _scalar_out(_green_raw(z, w, alpha))


def green_dw_bound(z, w, a, cfg: GreenEvalConfig = GreenEvalConfig()):
    """Right-hand side of the d/dw Green bound, divided by 2pi."""
    alpha = _alpha(a)
    if alpha < 0:
        raise DomainError("the derivative bound is stated for alpha >= 0")
    z, w = as_points(z, "z"), as_points(w, "w")
    _check_off_diagonal(z, w)
    den = np.abs(1.0 - np.conj(z) * w)
    x = one_minus_q2(z, w)
    log_q2 = 2.0 * (np.log(np.abs(z - w)) - np.log(den))
    first = alpha * cfg.c_alpha * den ** (alpha - 1.0) * x ** (alpha + 1.0) * (1.0 - log_q2)
    second = _dwbar_rhs(z, w, alpha, den)
    return _scalar_out((first + second) / TWO_PI)


def _dwbar_rhs(z, w, alpha, den):
    return (
        one_minus_abs2(z) ** (alpha + 1.0)
        * one_minus_abs2(w) ** alpha
        / (2.0 * den ** (alpha + 1.0) * np.abs(z - w))
    )


def green_dwbar_bound(z, w, a):
    """Right-hand side of the d/d(conj w) Green bound, divided by 2pi."""
    alpha = _alpha(a)
    z, w = as_points(z, "z"), as_points(w, "w")
    _check_off_diagonal(z, w)
    den = np.abs(1.0 - np.conj(z) * w)
    return _scalar_out(_dwbar_rhs(z, w, alpha, den) / TWO_PI)
