"""Dirichlet problem for -Lbar_alpha u = g through u = v + G_alpha[g], and
finite-difference application of L_alpha and Lbar_alpha."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .core import (
    DEFAULT_SPEC,
    AlphaDiskError,
    AlphaWeight,
    BoundarySignal,
    DiskField,
    IntegrabilityError,
    QuadratureSpec,
    StepError,
    _scalar_out,
    as_points,
    map_points,
    one_minus_abs2,
    validate_alpha,
)
from .kernels import _green_raw, v_kernel
from .quadrature import integrate_disk_recentered
from .transforms import _boundary_integral

# The potential uses the kernel G_alpha(w, z) = (1 - conj(w) z)^alpha h(q) / 2pi,
# i.e. green_alpha with its arguments swapped; with the order (z, w) the
# factor (1 - conj(z) w)^alpha is conjugated and -Lbar_alpha u = g fails for
# non-radial data.  The kernel also inverts -4 Lbar_alpha (u_{z zbar} is a
# quarter Laplacian while G_0 = log(1/q)/2pi inverts -Laplacian), hence the 4.
GREEN_SCALE = 4.0

DEFAULT_FD_STEP = 1e-2


# --------------------------------------------------------------------------
# envelope / integrability probe


def probe_radii():
    """64 probe radii: 32 uniform on [0, 1/2) and 1 - 2^-j for j = 1..32."""
    return np.concatenate([np.linspace(0.0, 0.5, 32, endpoint=False), 1.0 - 2.0 ** -np.arange(1, 33)])


@dataclass
class EnvelopeProbe:
    beta: float
    radii: np.ndarray
    scaled_max: np.ndarray  # max_theta |g| (1-|z|^2)^beta per radius
    growth: float
    bounded: bool


def probe_envelope(g: Callable, beta, n_theta=64, growth_limit=4.0) -> EnvelopeProbe:
    """Sample |g| (1-|z|^2)^beta on a 64 x 64 polar grid and test for growth at the rim.

    The claim is refuted when the largest value over the outermost eight
    radii (1 - |z| <= 2^-25) exceeds ``growth_limit`` times the largest value
    over the rest of the grid.
    """
    radii = probe_radii()
    th = 2 * np.pi * np.arange(n_theta) / n_theta
    z = np.multiply.outer(radii, np.exp(1j * th))
    vals = np.abs(np.asarray(g(z), dtype=complex) * np.ones_like(z))
    if not np.all(np.isfinite(vals)):
        raise IntegrabilityError("g is not finite on the probe grid")
    scaled = np.max(vals * one_minus_abs2(z) ** beta, axis=1)
    inner, outer = scaled[:-8], scaled[-8:]
    ref = max(float(np.max(inner)), np.finfo(float).tiny)
    growth = float(np.max(outer)) / ref
    bounded = growth <= growth_limit or float(np.max(outer)) <= 1e-300
    return EnvelopeProbe(float(beta), radii, scaled, growth, bool(bounded))


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DirichletProblem:
    alpha: AlphaWeight
    f: BoundarySignal
    g: DiskField
    spec: QuadratureSpec = DEFAULT_SPEC

    def __post_init__(self):
        object.__setattr__(self, "alpha", validate_alpha(self.alpha))
        a = self.alpha.alpha
        beta = self.g.envelope_exponent
        if beta is not None and beta >= a + 2.0:
            raise IntegrabilityError(
                f"envelope exponent {beta} >= alpha + 2 = {a + 2}; "
                "(1-|z|^2)^(alpha+1) g need not be integrable"
            )
        probe = probe_envelope(self.g, a + 1.0 if beta is None else beta)
        if not probe.bounded:
            raise IntegrabilityError(
                f"probe refutes |g| (1-|z|^2)^{probe.beta:g} bounded (rim growth x{probe.growth:.3g})"
            )


def boundary_part(problem: DirichletProblem, w):
    """v(w) = (1/2pi) int v_kernel(w, theta) f(theta) dtheta."""
    a = problem.alpha.alpha
    return _boundary_integral(lambda wi, th: v_kernel(wi, th, a), problem.f, w, problem.spec)


def green_integral(g: Callable, w, a, spec: QuadratureSpec = DEFAULT_SPEC, check=True, n_theta=None):
    """The unscaled area integral of G_alpha(w, z) g(z) over z in the disk."""
    alpha = validate_alpha(a).alpha
    w = complex(as_points(w, "w"))

    def integrand(z):
        return _green_raw(w, z, alpha) * g(z)

    return integrate_disk_recentered(integrand, w, spec, check=check, n_theta=n_theta)


def green_potential(problem: DirichletProblem, w, check=True):
    """Green potential of g at w, normalised so that -Lbar_alpha of it is g."""
    w = as_points(w, "w")
    out = np.empty(w.shape, dtype=complex)
    for idx, wi in np.ndenumerate(w):
        out[idx] = GREEN_SCALE * green_integral(problem.g, wi, problem.alpha, problem.spec, check)
    return _scalar_out(out)


@dataclass
class SolveReport:
    points: np.ndarray
    u: np.ndarray
    v: np.ndarray
    potential: np.ndarray
    failures: list = field(default_factory=list)
    residual_points: np.ndarray = field(default_factory=lambda: np.empty(0, complex))
    residual: np.ndarray = field(default_factory=lambda: np.empty(0))
    diagnostics: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residual)) if self.residual.size else 0.0


def solution_field(problem: DirichletProblem, check=False) -> DiskField:
    """u = v + G[g] as a rule-backed DiskField (each call runs the quadratures)."""

    def rule(z):
        z = np.asarray(z, dtype=complex)
        out = np.empty(z.shape, dtype=complex)
        for idx, zi in np.ndenumerate(z):
            out[idx] = boundary_part(problem, zi) + green_potential(problem, zi, check=check)
        return out

    return DiskField(rule=rule)


def solve(
    problem: DirichletProblem,
    eval_points: Sequence,
    residual_points: Optional[Sequence] = None,
    step: Optional[float] = None,
) -> SolveReport:
    """Evaluate u = v + G[g] at each point; per-point errors are collected, not raised.

    Residuals |-Lbar_alpha u - g| / max(|g|, 1) are computed at
    ``residual_points`` by finite differences of the computed u.
    """
    pts = as_points(eval_points, "eval_points").ravel()

    def one(w):
        try:
            v = complex(boundary_part(problem, w))
            p = complex(green_potential(problem, w))
            return v, p, None
        except AlphaDiskError as exc:
            return np.nan, np.nan, f"{type(exc).__name__}: {exc}"

    results = map_points(one, list(pts))
    v = np.array([r[0] for r in results], dtype=complex)
    pot = np.array([r[1] for r in results], dtype=complex)
    failures = [(i, r[2]) for i, r in enumerate(results) if r[2] is not None]
    report = SolveReport(pts, v + pot, v, pot, failures)

    if residual_points is not None and len(residual_points):
        probes = as_points(residual_points, "residual_points").ravel()
        field_u = solution_field(problem)

        def resid(z):
            h = step if step is not None else min(DEFAULT_FD_STEP, (1.0 - abs(z)) / 8.0)
            lbar = apply_lbar_alpha(field_u, z, problem.alpha, h)
            gz = complex(problem.g(np.array(z)))
            return abs(-lbar - gz) / max(abs(gz), 1.0)

        report.residual_points = probes
        report.residual = np.array(map_points(resid, list(probes)), dtype=float)
    report.diagnostics = {"alpha": problem.alpha.alpha, "green_scale": GREEN_SCALE}
    return report


# --------------------------------------------------------------------------
# finite-difference operators


def _derivatives(u: Union[DiskField, Callable], z, step):
    z = as_points(z)
    if np.any(step >= (1.0 - np.abs(z)) / 4.0):
        raise StepError(f"step {step} must be below (1-|z|)/4")
    if not step > 0:
        raise StepError("step must be positive")
    f = u if callable(u) else u.__call__
    zs = np.stack([z, z + step, z - step, z + 1j * step, z - 1j * step])
    vals = np.asarray(f(zs), dtype=complex)
    u0, ue, uw, un, us = vals
    ux = (ue - uw) / (2.0 * step)
    uy = (un - us) / (2.0 * step)
    u_z = 0.5 * (ux - 1j * uy)
    u_zbar = 0.5 * (ux + 1j * uy)
    u_zzbar = (ue + uw + un + us - 4.0 * u0) / (4.0 * step * step)
    return z, u_z, u_zbar, u_zzbar


def apply_lbar_alpha(u, z, a, step):
    """alpha (1-|z|^2)^(-alpha-1) z u_z + (1-|z|^2)^(-alpha) u_{z zbar} by central differences."""
    alpha = validate_alpha(a).alpha
    z, u_z, _, u_zzbar = _derivatives(u, z, step)
    d = one_minus_abs2(z)
    return _scalar_out(alpha * d ** (-alpha - 1.0) * z * u_z + d ** (-alpha) * u_zzbar)


def apply_l_alpha(u, z, a, step):
    """alpha (1-|z|^2)^(-alpha-1) conj(z) u_zbar + (1-|z|^2)^(-alpha) u_{z zbar}."""
    alpha = validate_alpha(a).alpha
    z, _, u_zbar, u_zzbar = _derivatives(u, z, step)
    d = one_minus_abs2(z)
    return _scalar_out(alpha * d ** (-alpha - 1.0) * np.conj(z) * u_zbar + d ** (-alpha) * u_zzbar)
