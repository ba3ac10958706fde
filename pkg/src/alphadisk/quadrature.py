"""Quadrature on the unit circle and the unit disk.

Three disk schemes share one building block, a tensor rule in (angle, radius)
whose radial factor is a composite Gauss-Legendre rule graded geometrically
(ratio 4) toward both ends of each ray:

* ``integrate_disk`` uses polar coordinates about the origin;
* ``integrate_disk_recentered`` uses polar coordinates about a point w, with
  each ray cut at its exact exit radius, so the area element s ds dt absorbs
  a 1/|z-w| singularity and leaves log|z-w| as an s log s endpoint;
* ``integrate_disk_mobius`` pulls the integrand back through phi_w and then
  integrates about the origin.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import (
    DEFAULT_SPEC,
    NonFiniteError,
    QuadratureSpec,
    ToleranceError,
    as_points,
    one_minus_abs2,
)

TWO_PI = 2.0 * np.pi
MAX_RIM_LEVELS = 20
# smallest 1 - |z|^2 we let a node reach; below this it is lost to rounding
MIN_RIM_DEPTH = 1e-13


@lru_cache(maxsize=32)
def _leggauss01(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def gauss_panels(breaks, n):
    """Composite n-point Gauss-Legendre nodes and weights on consecutive breakpoints."""
    b = np.asarray(breaks, dtype=float)
    x, w = _leggauss01(n)
    lo, hi = b[:-1], b[1:]
    nodes = lo[:, None] + np.multiply.outer(hi - lo, x)
    weights = np.multiply.outer(hi - lo, w)
    return nodes.ravel(), weights.ravel()


@lru_cache(maxsize=64)
def graded_unit_rule(n, inner_levels, outer_levels):
    """Rule on [0, 1] with panels shrinking by 4 toward 0 and toward 1."""
    inner = [0.5 * 4.0 ** (-k) for k in range(inner_levels, 0, -1)]
    outer = [1.0 - 0.5 * 4.0 ** (-k) for k in range(1, outer_levels + 1)]
    breaks = [0.0] + inner + [0.5] + outer + [1.0]
    nodes, weights = gauss_panels(breaks, n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def rim_levels_for(n, kappa, wanted):
    """Cap the rim grading so the deepest node keeps 1 - |z|^2 >= MIN_RIM_DEPTH.

    ``kappa`` bounds d(1 - |z|^2) / d(1 - u) from below near u = 1 over
    all rays of the rule.
    """
    x, _ = _leggauss01(n)
    first = float(x[0])
    levels = min(int(wanted), MAX_RIM_LEVELS)
    while levels > 0 and kappa * 0.5 * 4.0 ** (-levels) * first < MIN_RIM_DEPTH:
        levels -= 1
    return levels


@dataclass(frozen=True)
class CircleRule:
    n: int

    @property
    def nodes(self):
        return TWO_PI * np.arange(self.n) / self.n

    @property
    def weights(self):
        return np.full(self.n, TWO_PI / self.n)


def clustered_circle_rule(n, center=0.0, strength=0.0):
    """Trapezoid rule in tau after the circle automorphism
    exp(it) = exp(i center) (exp(i tau) + c) / (1 + c exp(i tau)), c = strength.

    Nodes crowd around ``center`` by the factor (1+c)/(1-c); the map is
    analytic and periodic, so spectral accuracy is kept.
    """
    c = float(strength)
    tau = TWO_PI * np.arange(n) / n
    e = np.exp(1j * tau)
    t = center + np.angle((e + c) / (1.0 + c * e))
    jac = (1.0 - c * c) / np.abs(1.0 + c * e) ** 2
    return np.mod(t, TWO_PI), jac * (TWO_PI / n)


def rim_strength(radius):
    """Clustering strength for features of width ~ (1 - radius) near the rim."""
    eps = 1.0 - float(radius)
    if eps >= 0.25:
        return 0.0
    return 1.0 - np.sqrt(eps)


def angular_count(spec: QuadratureSpec, radius, per_unit=24.0):
    """Angular node count for a feature of angular width ~ sqrt(1 - radius)."""
    eps = max(1.0 - float(radius), 1e-16)
    need = per_unit / np.sqrt(eps)
    n = spec.circle_nodes
    while n < need:
        n *= 2
    return n


def circle_panel_rule(focus=None, width=None, breakpoints=(), n=16, ratio=2.0):
    """Gauss-Legendre panels on [0, 2pi), graded geometrically toward ``focus``
    (smallest panel ``width``) and split at ``breakpoints``."""
    cuts = [0.0, TWO_PI]
    if focus is not None:
        focus = float(np.mod(focus, TWO_PI))
        d = float(width)
        offs = []
        while d < np.pi:
            offs.append(d)
            d *= ratio
        for o in [0.0] + offs + [-x for x in offs]:
            cuts.append(np.mod(focus + o, TWO_PI))
        cuts.append(np.mod(focus + np.pi, TWO_PI))
    cuts.extend(float(np.mod(b, TWO_PI)) for b in breakpoints)
    cuts = np.unique(np.round(np.asarray(cuts), 15))
    cuts = cuts[(cuts >= 0.0) & (cuts <= TWO_PI)]
    if cuts[0] > 0.0:
        cuts = np.insert(cuts, 0, 0.0)
    if cuts[-1] < TWO_PI:
        cuts = np.append(cuts, TWO_PI)
    return gauss_panels(cuts, n)


def _finite_sum(vals, weights):
    vals = np.asarray(vals)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteError("integrand returned non-finite values at quadrature nodes")
    return np.sum(vals * weights)


def integrate_circle(f, spec: QuadratureSpec = DEFAULT_SPEC):
    """Trapezoidal sum of f over [0, 2pi) at spec.circle_nodes uniform nodes."""
    rule = CircleRule(spec.circle_nodes)
    th = rule.nodes
    vals = np.asarray(f(th), dtype=complex) * np.ones_like(th)
    return complex(_finite_sum(vals, rule.weights))


@dataclass(frozen=True)
class DiskRule:
    """Nodes (complex) and area weights on the unit disk."""

    points: np.ndarray
    weights: np.ndarray
    center: complex | None = None

    def integrate(self, f):
        vals = np.asarray(f(self.points), dtype=complex)
        return complex(_finite_sum(vals, self.weights))

    @property
    def size(self):
        return self.points.size


def polar_rule(spec: QuadratureSpec, n_theta=None, cluster=(0.0, 0.0), rim_levels=None):
    """Tensor polar rule about the origin, graded toward r = 0 and r = 1."""
    n_theta = n_theta or spec.circle_nodes
    levels = spec.singular_ring_levels
    rim_levels = rim_levels_for(spec.radial_nodes, 2.0, rim_levels or 2 * levels)
    u, wu = graded_unit_rule(spec.radial_nodes, levels, rim_levels)
    t, wt = clustered_circle_rule(n_theta, *cluster)
    pts = np.multiply.outer(np.exp(1j * t), u)
    wts = np.multiply.outer(wt, wu * u)
    return DiskRule(pts.ravel(), wts.ravel(), 0j)


def ray_exit(w, t):
    """Distance from w to the unit circle along direction t (closed form)."""
    e = np.exp(1j * np.asarray(t, dtype=float))
    b = np.real(np.conj(w) * e)
    disc = b * b + (1.0 - abs(w) ** 2)
    # stable root of s^2 + 2 b s - (1 - |w|^2) = 0
    return (1.0 - abs(w) ** 2) / (b + np.sqrt(disc))


def recentered_rule(w, spec: QuadratureSpec, n_theta=None, extra_levels=0):
    """Polar rule centred at w with rays cut at the exact circle intersection."""
    w = complex(as_points(w, "w"))
    n_theta = n_theta or angular_count(spec, abs(w))
    levels = spec.singular_ring_levels + extra_levels
    t = TWO_PI * np.arange(n_theta) / n_theta
    S = ray_exit(w, t)
    # along a ray, 1 - |z|^2 = S (1-u) (S (1+u) + 2 b) ~ 2 S sqrt(b^2 + 1 - |w|^2) (1-u)
    d = one_minus_abs2(w)
    kappa = 2.0 * float(np.min(S)) * np.sqrt(d)
    rim = rim_levels_for(spec.radial_nodes, kappa, 2 * spec.singular_ring_levels)
    u, wu = graded_unit_rule(spec.radial_nodes, levels, rim)
    s = np.multiply.outer(S, u)
    pts = w + np.exp(1j * t)[:, None] * s
    wts = (TWO_PI / n_theta) * np.multiply.outer(S, wu) * s
    return DiskRule(pts.ravel(), wts.ravel(), w)


def _checked(build, f, spec, check):
    coarse = build(spec).integrate(f)
    if not check:
        return coarse
    fine = build(spec.refined()).integrate(f)
    if not spec.accepts(coarse, fine):
        raise ToleranceError(
            f"refinement disagreement |{coarse} - {fine}| exceeds tolerance "
            f"(abs {spec.abs_tol}, rel {spec.rel_tol})"
        )
    return fine


def integrate_disk(f, spec: QuadratureSpec = DEFAULT_SPEC, check=True):
    """Integral of f over the unit disk (area measure) by graded polar quadrature."""
    return _checked(lambda s: polar_rule(s), f, spec, check)


def integrate_disk_recentered(
    f, w, spec: QuadratureSpec = DEFAULT_SPEC, check=True, n_theta=None, extra_levels=None
):
    """Integral over the disk in polar coordinates centred at w.

    Suited to integrands with a 1/|z-w| or log|z-w| singularity at w.
    """
    w = complex(as_points(w, "w"))
    extra = (4 if abs(w) >= 0.95 else 0) if extra_levels is None else int(extra_levels)

    def build(s):
        nt = None if n_theta is None else n_theta * (s.circle_nodes // spec.circle_nodes)
        return recentered_rule(w, s, nt, extra)

    return _checked(build, f, spec, check)


def mobius_rule(w, spec: QuadratureSpec, n_theta=None):
    """Polar rule in zeta pushed forward by z = phi_w(zeta), with the Jacobian."""
    w = complex(as_points(w, "w"))
    # phi_w shrinks 1 - |zeta|^2 by at least (1-|w|)/(1+|w|)
    kappa = 2.0 * (1.0 - abs(w)) / (1.0 + abs(w))
    base = polar_rule(
        spec,
        n_theta=n_theta or angular_count(spec, abs(w)),
        cluster=(np.angle(w), rim_strength(abs(w))),
        rim_levels=rim_levels_for(spec.radial_nodes, kappa, 2 * spec.singular_ring_levels),
    )
    zeta = base.points
    den = 1.0 - np.conj(w) * zeta
    z = (w - zeta) / den
    jac = ((1.0 - abs(w) ** 2) / np.abs(den) ** 2) ** 2
    return DiskRule(z, base.weights * jac, w)


def integrate_disk_mobius(f, w, spec: QuadratureSpec = DEFAULT_SPEC, check=True):
    """Integral of f over the disk computed as the integral of
    f(phi_w(zeta)) (1-|w|^2)^2 / |1 - conj(w) zeta|^4 over zeta in the disk."""
    w = complex(as_points(w, "w"))
    return _checked(lambda s: mobius_rule(w, s), f, spec, check)
