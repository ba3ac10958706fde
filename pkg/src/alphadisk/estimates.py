"""Numerical checks of the integral estimates behind the Lipschitz bounds.

Nothing here proves anything: each routine evaluates the quantity an
inequality talks about and reports observed constants.
"""
from __future__ import annotations

from typing import Callable, Optional, Sequence

import numpy as np

from .core import (
    DEFAULT_SPEC,
    BoundReport,
    DegeneratePairError,
    DiskField,
    DomainError,
    EnvelopeError,
    QuadratureSpec,
    StepError,
    as_points,
    map_points,
    one_minus_abs2,
    polar_field,
    validate_alpha,
)
from .kernels import GreenEvalConfig, _green_raw, green_dw_bound, green_dwbar_bound
from .quadrature import (
    angular_count,
    clustered_circle_rule,
    integrate_disk_recentered,
    polar_rule,
    rim_strength,
)
from .solver import GREEN_SCALE, green_integral, probe_envelope

TWO_PI = 2.0 * np.pi

__all__ = [
    "BoundReport",
    "circle_power_integral",
    "circle_power_ratio",
    "compute_M1",
    "compute_I1",
    "compute_I2",
    "lemma_ratio",
    "verify_green_derivative_bounds",
    "lipschitz_quotient",
    "grin_lip_sweep",
    "m1_sweep",
    "circle_power_sweep",
    "lemma_sweep",
]


def circle_power_integral(r, rho, beta, spec: QuadratureSpec = DEFAULT_SPEC):
    """int_0^{2pi} |1 - r rho e^{it}|^{-beta} dt."""
    if not (0.0 < r < 1.0 and 0.0 < rho < 1.0):
        raise DomainError("need 0 < r, rho < 1")
    if not beta > 1.0:
        raise DomainError("need beta > 1")
    a = r * rho
    n = angular_count(spec, a)
    t, wt = clustered_circle_rule(n, 0.0, rim_strength(a))
    vals = np.abs(1.0 - a * np.exp(1j * t)) ** (-beta)
    return float(np.sum(vals * wt))


def circle_power_ratio(r, rho, beta, spec: QuadratureSpec = DEFAULT_SPEC):
    """circle_power_integral * (1 - r rho)^(beta - 1)."""
    return circle_power_integral(r, rho, beta, spec) * (1.0 - r * rho) ** (beta - 1.0)


def compute_M1(r, spec: QuadratureSpec = DEFAULT_SPEC):
    """Area integral of 1/|z - r| over the disk."""
    if not 0.0 < r < 1.0:
        raise DomainError("need 0 < r < 1")
    return integrate_disk_recentered(lambda z: 1.0 / np.abs(z - r), r, spec).real


def compute_I1(w, a, spec: QuadratureSpec = DEFAULT_SPEC):
    alpha = validate_alpha(a).alpha
    if alpha < 0:
        raise DomainError("I1 is studied for alpha >= 0")
    w = complex(as_points(w, "w"))
    dw = one_minus_abs2(w)

    def integrand(z):
        den = np.abs(1.0 - np.conj(z) * w)
        return one_minus_abs2(z) ** (alpha + 1.0) * dw ** alpha / (2.0 * den ** (alpha + 1.0) * np.abs(z - w))

    return integrate_disk_recentered(integrand, w, spec).real


def _i2_zeta_integrand(w, alpha):
    dw = one_minus_abs2(w)

    def f(zeta):
        a2 = np.abs(zeta) ** 2
        return (
            dw ** (alpha + 1.0)
            * one_minus_abs2(zeta) ** (alpha + 1.0)
            * np.abs(1.0 - np.conj(w) * zeta) ** (-(alpha + 3.0))
            * (1.0 - np.log(a2))
        )

    return f


def compute_I2(w, a, spec: QuadratureSpec = DEFAULT_SPEC, check=True):
    """I2(w) in the variable zeta = phi_w(z), where the log singularity sits at 0."""
    alpha = validate_alpha(a).alpha
    if not alpha > 0:
        raise DomainError("I2 is studied for alpha > 0")
    w = complex(as_points(w, "w"))
    f = _i2_zeta_integrand(w, alpha)
    cluster = (np.angle(w), rim_strength(abs(w)))

    def build(s):
        return polar_rule(s, n_theta=angular_count(s, abs(w)), cluster=cluster)

    coarse = build(spec).integrate(f).real
    if not check:
        return coarse
    fine = build(spec.refined()).integrate(f).real
    if not spec.accepts(coarse, fine):
        from .core import ToleranceError

        raise ToleranceError(f"I2 refinement disagreement {coarse} vs {fine}")
    return fine


def lemma_ratio(value, w, a):
    """value / (1 - |w|^2)^alpha, the quantity the I1 / I2 lemmas keep bounded."""
    return value / one_minus_abs2(complex(w)) ** validate_alpha(a).alpha


# --------------------------------------------------------------------------


def _fd_wirtinger(fun, w, h):
    """Fourth-order central differences for (d/dw, d/dwbar) of a scalar function."""
    c = np.array([1.0, -8.0, 8.0, -1.0]) / (12.0 * h)
    offs = np.array([-2.0, -1.0, 1.0, 2.0]) * h
    fx = sum(ci * fun(w + o) for ci, o in zip(c, offs))
    fy = sum(ci * fun(w + 1j * o) for ci, o in zip(c, offs))
    return 0.5 * (fx - 1j * fy), 0.5 * (fx + 1j * fy)


def verify_green_derivative_bounds(
    z, w, a, cfg: GreenEvalConfig = GreenEvalConfig(), step: Optional[float] = None, tol=1e-3
) -> BoundReport:
    """Finite-difference |d_w G| and |d_wbar G| against the two displayed bounds.

    ``z`` and ``w`` are equal-length arrays of pairs.  The d_w ratio is only
    meaningful up to the configured constant C_alpha.  Returns one report
    whose samples are tagged ``dw`` / ``dwbar``; diagnostics hold the max
    ratio of each kind.
    """
    alpha = validate_alpha(a).alpha
    z = np.atleast_1d(as_points(z, "z"))
    w = np.atleast_1d(as_points(w, "w"))
    z, w = np.broadcast_arrays(z, w)
    sep = np.abs(z - w)
    rim = 1.0 - np.abs(w)
    h = 1e-2 * np.minimum(sep, rim) if step is None else np.full(w.shape, float(step))
    if np.any(sep <= 10.0 * h) or np.any(2.0 * h >= rim):
        raise StepError("finite-difference stencil reaches the diagonal or the rim")

    dw = np.empty(w.shape, dtype=complex)
    dwb = np.empty(w.shape, dtype=complex)
    for i in range(w.size):
        zi = z.flat[i]
        dw.flat[i], dwb.flat[i] = _fd_wirtinger(lambda x: _green_raw(zi, x, alpha), w.flat[i], h.flat[i])
    rhs_w = np.asarray(green_dw_bound(z, w, alpha, cfg))
    rhs_wb = np.asarray(green_dwbar_bound(z, w, alpha))
    lhs = np.concatenate([np.abs(dw).ravel(), np.abs(dwb).ravel()])
    rhs = np.concatenate([rhs_w.ravel(), rhs_wb.ravel()])
    labels = [f"dw z={complex(zi)!r} w={complex(wi)!r}" for zi, wi in zip(z.ravel(), w.ravel())]
    labels += [f"dwbar z={complex(zi)!r} w={complex(wi)!r}" for zi, wi in zip(z.ravel(), w.ravel())]
    ratio = lhs / rhs
    n = w.size
    return BoundReport(
        name="green-bounds",
        samples=labels,
        lhs=lhs,
        rhs=rhs,
        ratio=ratio,
        ceiling=1.0 + tol,
        diagnostics={
            "alpha": alpha,
            "c_alpha": cfg.c_alpha,
            "max_ratio_dw": float(np.max(ratio[:n])),
            "max_ratio_dwbar": float(np.max(ratio[n:])),
        },
    )


def lipschitz_quotient(field: Callable, pairs) -> float:
    """max |u(z1) - u(z2)| / |z1 - z2| over the given pairs."""
    pairs = np.asarray(pairs, dtype=complex)
    if pairs.ndim != 2 or pairs.shape[1] != 2:
        raise DomainError("pairs must have shape (n, 2)")
    z1, z2 = pairs[:, 0], pairs[:, 1]
    dist = np.abs(z1 - z2)
    if np.any(dist == 0.0):
        raise DegeneratePairError("coincident pair")
    return float(np.max(np.abs(np.asarray(field(z1)) - np.asarray(field(z2))) / dist))


def random_pairs(n, r_max=0.999, seed=0):
    """Local pairs: z1 spread over the disk and toward |z| = r_max, z2 a short hop away."""
    rng = np.random.default_rng(seed)
    half = n // 2
    r_bulk = r_max * np.sqrt(rng.uniform(0.0, 1.0, n - half))
    r_rim = r_max - (r_max - 0.5) * 10.0 ** rng.uniform(-4.0, 0.0, half)
    r = np.concatenate([r_bulk, r_rim])
    z1 = r * np.exp(2j * np.pi * rng.uniform(size=n))
    hop = 10.0 ** rng.uniform(-4.0, -1.0, n) * np.exp(2j * np.pi * rng.uniform(size=n))
    z2 = z1 + hop
    out = np.abs(z2) > r_max
    z2[out] = z2[out] * (r_max / np.abs(z2[out]))
    same = z1 == z2
    z2[same] = z1[same] * (1.0 - 1e-4)
    return np.stack([z1, z2], axis=1)


def potential_field(g: Callable, a, radii, n_theta, spec: QuadratureSpec = DEFAULT_SPEC) -> DiskField:
    """The normalised Green potential of g tabulated on a polar grid."""

    def fun(w):
        return GREEN_SCALE * green_integral(g, w, a, spec, check=False)

    return polar_field(fun, radii, n_theta)


def default_field_radii():
    return np.concatenate([np.linspace(0.0, 0.9, 19), 1.0 - 10.0 ** -np.linspace(1.1, 3.0, 13)])


def grin_lip_sweep(
    a, g: Callable, radii: Sequence[float], spec: QuadratureSpec = DEFAULT_SPEC, n_angles=8, ceiling=2.0
) -> BoundReport:
    """Max |d_w| and |d_wbar| of the Green potential of g on circles of the given radii.

    Checks the envelope |g| <= M (1-|z|^2)^-alpha by probing first.  The
    verdict passes when, for each derivative, the max on the largest radius
    is at most ``ceiling`` times the max over the other radii.
    """
    aw = validate_alpha(a)
    if not aw.positive:
        raise DomainError("the Green-potential bound is stated for alpha > 0")
    alpha = aw.alpha
    probe = probe_envelope(g, alpha)
    if not probe.bounded:
        raise EnvelopeError(
            f"|g| (1-|z|^2)^{alpha:g} grows toward the rim (x{probe.growth:.3g}); hypothesis refuted"
        )
    radii = np.sort(np.asarray(radii, dtype=float))
    if radii.size < 2 or radii[0] <= 0.0 or radii[-1] >= 1.0:
        raise DomainError("need at least two radii in (0, 1)")
    phis = TWO_PI * (np.arange(n_angles) + 0.5) / n_angles

    def at(w):
        h = (1.0 - abs(w)) / 16.0
        nt = angular_count(spec, abs(w) + 2.0 * h)
        extra = 4 if abs(w) >= 0.95 else 0

        def pot(x):
            return GREEN_SCALE * integrate_disk_recentered(
                lambda z: _green_raw(x, z, alpha) * g(z), x, spec, check=False, n_theta=nt, extra_levels=extra
            )

        return _fd_wirtinger(pot, w, h)

    pts = [r * np.exp(1j * p) for r in radii for p in phis]
    ders = np.array(map_points(at, pts)).reshape(len(radii), n_angles, 2)
    mags = np.abs(ders)
    per_radius = mags.max(axis=1)  # (n_radii, 2)
    inner_max = per_radius[:-1].max(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(per_radius == 0.0, 0.0, per_radius / inner_max)
    return BoundReport(
        name="grin-lip",
        samples=[f"dw r={r:.17g}" for r in radii] + [f"dwbar r={r:.17g}" for r in radii],
        lhs=np.concatenate([per_radius[:, 0], per_radius[:, 1]]),
        rhs=np.concatenate([np.full(len(radii), inner_max[0]), np.full(len(radii), inner_max[1])]),
        ratio=np.concatenate([ratio[:, 0], ratio[:, 1]]),
        ceiling=ceiling,
        metric="ratio_to_inner_max",
        diagnostics={"alpha": alpha, "n_angles": n_angles, "envelope_growth": probe.growth},
    )


# --------------------------------------------------------------------------
# sweeps returning BoundReports (used by the command line and the acceptance suite)

M1_RADII = (
    0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.85, 0.9,
    0.93, 0.95, 0.97, 0.98, 0.99, 0.993, 0.995, 0.997, 0.998, 0.999,
)
LEMMA_RADII = (0.5, 0.9, 0.99, 0.999)


def m1_sweep(radii=M1_RADII, spec: QuadratureSpec = DEFAULT_SPEC, slack=1e-6) -> BoundReport:
    """M_1(r) against the uniform bound 4 pi."""
    radii = np.asarray(radii, dtype=float)
    vals = np.array(map_points(lambda r: compute_M1(r, spec), list(radii)))
    bound = 4.0 * np.pi
    return BoundReport(
        name="m1",
        samples=[f"r={r:.17g}" for r in radii],
        lhs=vals,
        rhs=np.full(radii.shape, bound),
        ratio=vals / bound,
        ceiling=1.0 + slack / bound,
    )


def circle_power_sweep(betas=(2.0, 3.0, 4.0), n_grid=20, spec: QuadratureSpec = DEFAULT_SPEC, spread=10.0):
    """Companion ratios on an n_grid x n_grid (r, rho) grid, each divided by
    the smallest ratio for its beta; passes when max/min <= ``spread``."""
    grid = np.linspace(0.05, 0.999, n_grid)
    samples, lhs, rhs = [], [], []
    for beta in betas:
        vals = np.array([[circle_power_ratio(r, p, beta, spec) for p in grid] for r in grid])
        lo = float(vals.min())
        for i, r in enumerate(grid):
            for j, p in enumerate(grid):
                samples.append(f"beta={beta:g} r={r:.17g} rho={p:.17g}")
                lhs.append(vals[i, j])
                rhs.append(lo)
    lhs, rhs = np.array(lhs), np.array(rhs)
    return BoundReport(
        name="circle-power",
        samples=samples,
        lhs=lhs,
        rhs=rhs,
        ratio=lhs / rhs,
        ceiling=spread,
        metric="ratio_to_min",
        diagnostics={"betas": list(betas), "n_grid": n_grid},
    )


def lemma_sweep(kind, a, radii=LEMMA_RADII, spec: QuadratureSpec = DEFAULT_SPEC, safety=2.0) -> BoundReport:
    """I_k(w)/(1-|w|^2)^alpha along the positive axis, against a reference constant.

    For I1 the reference is the largest ratio over |w| <= 0.9; for I2 it is
    the ratio at the smallest radius.  ``safety`` times the reference is the
    ceiling, so the verdict reads "no growth toward the rim".
    """
    fn = {"i1": compute_I1, "i2": compute_I2}[kind]
    alpha = validate_alpha(a).alpha
    radii = np.asarray(radii, dtype=float)
    vals = np.array(map_points(lambda r: fn(r, alpha, spec), list(radii)))
    ratios = vals / one_minus_abs2(radii) ** alpha
    if kind == "i1":
        ref = float(np.max(ratios[radii <= 0.9]))
    else:
        ref = float(ratios[0])
    return BoundReport(
        name=kind,
        samples=[f"alpha={alpha:g} |w|={r:.17g}" for r in radii],
        lhs=ratios,
        rhs=np.full(radii.shape, ref),
        ratio=ratios / ref,
        ceiling=safety,
        metric="ratio_to_reference",
        diagnostics={"alpha": alpha, "values": vals.tolist(), "spread": float(ratios.max() / ratios.min())},
    )
