"""Boundary machinery: Poisson extensions, the Hilbert transform, Hardy means
and the S-operator."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_SPEC,
    BoundarySignal,
    BoundReport,
    DiskField,
    DomainError,
    MarginError,
    NonFiniteError,
    QuadratureSpec,
    _alpha,
    _scalar_out,
    as_points,
    one_minus_abs2,
)
from .quadrature import circle_panel_rule

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class FourierSpectrum:
    """Coefficients c_k, k in [-n/2, n/2), in numpy FFT order."""

    k: np.ndarray
    c: np.ndarray

    @classmethod
    def of(cls, psi: BoundarySignal):
        n = psi.n
        return cls(np.fft.fftfreq(n, 1.0 / n).astype(int), np.fft.fft(psi.samples) / n)

    def signal(self) -> BoundarySignal:
        return BoundarySignal(np.fft.ifft(self.c) * len(self.c))


# --------------------------------------------------------------------------
# boundary integrals (1/2pi) int K(z, theta) psi(theta) dtheta


def _rule_for(psi: BoundarySignal, z: complex, spec: QuadratureSpec):
    """Nodes, weights and psi values for a boundary integral evaluated at z.

    Sampled signals use their own uniform nodes.  Signals with a rule use
    uniform nodes unless z is close to the rim or the rule has kinks, in
    which case Gauss panels graded toward arg z and split at the kinks.
    """
    if psi.rule is None:
        th = psi.thetas
        return th, np.full(psi.n, TWO_PI / psi.n), psi.samples
    n = spec.circle_nodes
    eps = 1.0 - abs(z)
    if not psi.breakpoints and eps * n >= 40.0:
        th = TWO_PI * np.arange(n) / n
        return th, np.full(n, TWO_PI / n), psi(th)
    th, wt = circle_panel_rule(
        focus=np.angle(z), width=max(eps, 1e-14) / 4.0, breakpoints=psi.breakpoints, n=16
    )
    return th, wt, psi(th)


def _boundary_integral(kernel, psi, z, spec):
    z = as_points(z)
    out = np.empty(z.shape, dtype=complex)
    for idx, zi in np.ndenumerate(z):
        th, wt, vals = _rule_for(psi, complex(zi), spec)
        k = kernel(complex(zi), th)
        s = np.sum(k * vals * wt) / TWO_PI
        if not np.isfinite(s):
            raise NonFiniteError("non-finite boundary integral")
        out[idx] = s
    return _scalar_out(out)


def _classical_kernel(z, th):
    xi = z * np.exp(-1j * th)
    return one_minus_abs2(xi) / np.abs(1.0 - xi) ** 2


def poisson_extend(psi: BoundarySignal, z, spec: QuadratureSpec = DEFAULT_SPEC):
    """Harmonic extension P[psi](z)."""
    return _boundary_integral(_classical_kernel, psi, z, spec)


def alpha_poisson_extend(psi: BoundarySignal, z, a, spec: QuadratureSpec = DEFAULT_SPEC):
    """P_alpha[psi](z) = (1/2pi) int P_alpha(z e^{-i theta}) psi(theta) dtheta."""
    alpha = _alpha(a)

    def kernel(zi, th):
        xi = zi * np.exp(-1j * th)
        return one_minus_abs2(xi) ** (alpha + 1.0) / ((1.0 - xi) * (1.0 - np.conj(xi)) ** (alpha + 1.0))

    return _boundary_integral(kernel, psi, z, spec)


def alpha_poisson_gradient(psi: BoundarySignal, z, a, spec: QuadratureSpec = DEFAULT_SPEC):
    """(d/dz, d/dzbar) of P_alpha[psi] by differentiating the kernel under the integral."""
    alpha = _alpha(a)

    def base(zi, th):
        e = np.exp(-1j * th)
        xi = zi * e
        d = one_minus_abs2(xi)
        p = d ** (alpha + 1.0) / ((1.0 - xi) * (1.0 - np.conj(xi)) ** (alpha + 1.0))
        return e, xi, d, p

    def dz_kernel(zi, th):
        e, xi, d, p = base(zi, th)
        return e * p * (1.0 / (1.0 - xi) - (alpha + 1.0) * np.conj(xi) / d)

    def dzbar_kernel(zi, th):
        e, xi, d, p = base(zi, th)
        return np.conj(e) * p * (alpha + 1.0) * (1.0 / (1.0 - np.conj(xi)) - xi / d)

    return (
        _boundary_integral(dz_kernel, psi, z, spec),
        _boundary_integral(dzbar_kernel, psi, z, spec),
    )


# --------------------------------------------------------------------------
# Hilbert transform


def _check_finite(psi):
    if not np.all(np.isfinite(psi.samples)):
        raise NonFiniteError("signal has non-finite samples")


def spectral_derivative(psi: BoundarySignal) -> BoundarySignal:
    """psi' by the multiplier ik (Nyquist mode dropped)."""
    spec = FourierSpectrum.of(psi)
    mult = 1j * spec.k
    mult[psi.n // 2] = 0.0
    return FourierSpectrum(spec.k, spec.c * mult).signal()


def hilbert_multiplier(psi: BoundarySignal) -> BoundarySignal:
    spec = FourierSpectrum.of(psi)
    return FourierSpectrum(spec.k, -1j * np.sign(spec.k) * spec.c).signal()


def hilbert_pv(psi: BoundarySignal) -> BoundarySignal:
    """Principal-value quadrature of
    H(psi)(phi) = -(1/2pi) int_0^pi (psi(phi+t) - psi(phi-t)) / tan(t/2) dt.

    Only odd offsets t = 2 pi m / n (m odd) enter, which keeps the window
    around t = 0 symmetric and the rule exact for trigonometric polynomials
    of degree below n/2.
    """
    n = psi.n
    m = np.arange(1, n, 2)
    cot = 1.0 / np.tan(np.pi * m / n)
    j = np.arange(n)
    idx = (j[:, None] - m[None, :]) % n
    vals = (2.0 / n) * (psi.samples[idx] @ cot)
    return BoundarySignal(vals)


def hilbert_transform(psi: BoundarySignal, method: str = "multiplier") -> BoundarySignal:
    _check_finite(psi)
    if method == "multiplier":
        return hilbert_multiplier(psi)
    if method == "pv":
        return hilbert_pv(psi)
    raise DomainError(f"unknown Hilbert method {method!r}")


def conjugate_identity_check(
    psi: BoundarySignal, r, spec: QuadratureSpec = DEFAULT_SPEC, n_points=32, tol=1e-6, step=1e-3
) -> BoundReport:
    """Compare r d/dr P[psi] with P[H(psi')] on the circle of radius r."""
    if not 0.0 < r < 1.0 or r + 2 * step >= 1.0 or r - 2 * step <= 0.0:
        raise DomainError("need 0 < r - 2 step and r + 2 step < 1")
    phi = TWO_PI * np.arange(n_points) / n_points
    e = np.exp(1j * phi)
    u = {k: np.asarray(poisson_extend(psi, (r + k * step) * e, spec)) for k in (-2, -1, 1, 2)}
    dr = (u[-2] - 8 * u[-1] + 8 * u[1] - u[2]) / (12.0 * step)
    lhs = r * dr
    rhs = np.asarray(poisson_extend(hilbert_transform(spectral_derivative(psi)), r * e, spec))
    disc = np.abs(lhs - rhs)
    return BoundReport(
        name="conjugate-identity",
        samples=[f"r={r:.17g} phi={p:.17g}" for p in phi],
        lhs=lhs,
        rhs=rhs,
        ratio=disc,
        ceiling=tol,
        metric="discrepancy",
        diagnostics={"step": step, "n_points": n_points},
    )


# --------------------------------------------------------------------------
# Hardy means


def hardy_mean(f: DiskField, p, r, spec: QuadratureSpec = DEFAULT_SPEC):
    """M_p(r, f); p = inf gives the max over the angular nodes."""
    if not 0.0 < r < 1.0:
        raise DomainError("hardy_mean needs 0 < r < 1")
    n = spec.circle_nodes
    th = TWO_PI * np.arange(n) / n
    vals = np.abs(np.asarray(f(r * np.exp(1j * th))))
    if not np.all(np.isfinite(vals)):
        raise NonFiniteError("field is not finite on the circle")
    if np.isinf(p):
        return float(np.max(vals))
    if not p > 0:
        raise DomainError("p must be positive")
    return float(np.mean(vals ** p) ** (1.0 / p))


@dataclass
class HardyNorm:
    value: float
    diverged: bool
    radii: np.ndarray
    means: np.ndarray


def hardy_norm(f: DiskField, p, spec: QuadratureSpec = DEFAULT_SPEC, levels=20, ceiling=1e6) -> HardyNorm:
    """sup_r M_p(r, f) over r_j = 1 - 2^-j; ``diverged`` when a mean exceeds ``ceiling``."""
    radii = 1.0 - 2.0 ** -np.arange(1, levels + 1)
    means = np.array([hardy_mean(f, p, r, spec) for r in radii])
    return HardyNorm(float(np.max(means)), bool(np.max(means) > ceiling), radii, means)


# --------------------------------------------------------------------------


def s_margin(spec: QuadratureSpec):
    return 10.0 * TWO_PI / spec.circle_nodes


def s_operator(fprime: BoundarySignal, w, a, spec: QuadratureSpec = DEFAULT_SPEC):
    """S[f](w) = (1/pi) int (1-|w|^2)^a / (1 - z conj w)^a * Im(w conj z) / |z-w|^2 f(t) dt."""
    alpha = _alpha(a)
    w = complex(as_points(w, "w"))
    if abs(w) > 1.0 - s_margin(spec):
        raise MarginError(
            f"|w| = {abs(w)} exceeds 1 - {s_margin(spec):.3g} for {spec.circle_nodes} nodes"
        )
    n = spec.circle_nodes
    t = TWO_PI * np.arange(n) / n
    z = np.exp(1j * t)
    vals = fprime.resampled(n)
    k = (
        (1.0 - abs(w) ** 2) ** alpha
        / (1.0 - z * np.conj(w)) ** alpha
        * np.imag(w * np.conj(z))
        / np.abs(z - w) ** 2
    )
    return complex(np.sum(k * vals) * (TWO_PI / n) / np.pi)


def hilbert_closed_form_report(n=512, tol_multiplier=1e-10, tol_pv=1e-4) -> BoundReport:
    """H(cos) = sin, H(sin) = -cos and H(1) = 0 by both methods.

    The reported metric is the max discrepancy divided by the method's
    tolerance, so the ceiling is 1 for every row.
    """
    cases = [
        ("cos", np.cos, np.sin),
        ("sin", np.sin, lambda t: -np.cos(t)),
        ("one", lambda t: np.ones_like(t), lambda t: np.zeros_like(t)),
    ]
    samples, lhs, rhs, ratio = [], [], [], []
    th = TWO_PI * np.arange(n) / n
    for method, tol in (("multiplier", tol_multiplier), ("pv", tol_pv)):
        for name, f, hf in cases:
            got = hilbert_transform(BoundarySignal(f(th) + 0j), method).samples
            err = float(np.max(np.abs(got - hf(th))))
            samples.append(f"{method} H({name})")
            lhs.append(err)
            rhs.append(tol)
            ratio.append(err / tol)
    return BoundReport(
        name="hilbert",
        samples=samples,
        lhs=np.array(lhs),
        rhs=np.array(rhs),
        ratio=np.array(ratio),
        ceiling=1.0,
        metric="error_over_tol",
        diagnostics={"n": n},
    )
