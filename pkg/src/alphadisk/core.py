"""Domain types, validation and error classes shared by every module."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np


class AlphaDiskError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(AlphaDiskError, ValueError):
    pass


class SingularityError(AlphaDiskError, ValueError):
    pass


class NonFiniteError(AlphaDiskError, ArithmeticError):
    pass


class ToleranceError(AlphaDiskError, ArithmeticError):
    pass


class MarginError(AlphaDiskError, ValueError):
    pass


class StepError(AlphaDiskError, ValueError):
    pass


class IntegrabilityError(AlphaDiskError, ValueError):
    pass


class EnvelopeError(IntegrabilityError):
    pass


class DegeneratePairError(AlphaDiskError, ValueError):
    pass


# |z - w| below this is treated as the diagonal of the Green function
DIAGONAL_EPS = 1e-14


@dataclass(frozen=True)
class AlphaWeight:
    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not np.isfinite(a) or a <= -1.0:
            raise DomainError(f"alpha must be > -1, got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)

    @property
    def positive(self) -> bool:
        return self.alpha > 0.0

    def __float__(self):
        return self.alpha


def validate_alpha(x) -> AlphaWeight:
    if isinstance(x, AlphaWeight):
        return x
    return AlphaWeight(x)


def _alpha(a) -> float:
    return validate_alpha(a).alpha


@dataclass(frozen=True)
class DiskPoint:
    re: float
    im: float

    def __post_init__(self):
        re, im = float(self.re), float(self.im)
        if not (np.isfinite(re) and np.isfinite(im)):
            raise NonFiniteError(f"point ({re}, {im}) is not finite")
        if re * re + im * im >= 1.0:
            raise DomainError(f"point ({re}, {im}) is not in the open unit disk")
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    @classmethod
    def from_complex(cls, z) -> "DiskPoint":
        z = complex(z)
        return cls(z.real, z.imag)

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)

    def __complex__(self):
        return self.z

    def __abs__(self):
        return abs(self.z)


def as_points(z, name="z"):
    """Coerce DiskPoint / complex / array-like to a complex ndarray inside the disk."""
    if isinstance(z, DiskPoint):
        arr = np.asarray(z.z, dtype=complex)
    elif isinstance(z, (list, tuple)) and any(isinstance(p, DiskPoint) for p in z):
        arr = np.array([complex(p) for p in z], dtype=complex)
    else:
        arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} has non-finite entries")
    if np.any(arr.real ** 2 + arr.imag ** 2 >= 1.0):
        raise DomainError(f"{name} must lie in the open unit disk")
    return arr


def _scalar_out(x):
    return x.item() if isinstance(x, np.ndarray) and x.ndim == 0 else x


def one_minus_abs2(z):
    """1 - |z|^2, computed as (1-|z|)(1+|z|) to keep relative accuracy at the rim."""
    r = np.abs(z)
    return (1.0 - r) * (1.0 + r)


def weight_rho(z, a):
    """The weight (1 - |z|^2)^(-alpha)."""
    alpha = _alpha(a)
    zz = as_points(z)
    return _scalar_out(one_minus_abs2(zz) ** (-alpha))


@dataclass(frozen=True)
class QuadratureSpec:
    circle_nodes: int = 128
    radial_nodes: int = 12
    singular_ring_levels: int = 10
    abs_tol: float = 1e-8
    rel_tol: float = 1e-6

    def __post_init__(self):
        for name in ("circle_nodes", "radial_nodes", "singular_ring_levels"):
            v = getattr(self, name)
            if int(v) != v or v < 4:
                raise DomainError(f"{name} must be an integer >= 4, got {v!r}")
            object.__setattr__(self, name, int(v))
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("tolerances must be positive")

    def refined(self) -> "QuadratureSpec":
        return QuadratureSpec(
            circle_nodes=2 * self.circle_nodes,
            radial_nodes=self.radial_nodes + self.radial_nodes // 2,
            singular_ring_levels=self.singular_ring_levels + 2,
            abs_tol=self.abs_tol,
            rel_tol=self.rel_tol,
        )

    def accepts(self, a, b) -> bool:
        return abs(a - b) <= max(self.abs_tol, self.rel_tol * abs(b))


DEFAULT_SPEC = QuadratureSpec()


@dataclass(frozen=True)
class BoundarySignal:
    """A 2pi-periodic function sampled at theta_k = 2 pi k / n, with an optional rule.

    ``breakpoints`` lists angles where the rule is not smooth (used by
    panel quadratures); it is empty for smooth signals.
    """

    samples: np.ndarray
    rule: Optional[Callable] = None
    breakpoints: tuple = ()
    agree_tol: float = 1e-10

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        n = s.shape[0] if s.ndim == 1 else -1
        if n < 4 or n % 2:
            raise DomainError(f"sample count must be even and >= 4, got {s.shape}")
        if not np.all(np.isfinite(s)):
            raise NonFiniteError("signal samples are not finite")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)
        if self.rule is not None:
            ref = np.asarray(self.rule(self.thetas), dtype=complex)
            scale = max(1.0, float(np.max(np.abs(ref))))
            if np.max(np.abs(ref - s)) > self.agree_tol * scale:
                raise DomainError("samples disagree with the rule at the nodes")

    @classmethod
    def from_rule(cls, rule, n=256, breakpoints=()):
        th = 2 * np.pi * np.arange(n) / n
        return cls(np.asarray(rule(th), dtype=complex) * np.ones(n), rule, tuple(breakpoints))

    @classmethod
    def from_samples(cls, samples):
        return cls(np.asarray(samples, dtype=complex))

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @property
    def thetas(self):
        return 2 * np.pi * np.arange(self.n) / self.n

    def __call__(self, theta):
        """Evaluate by rule, or by trigonometric interpolation of the samples."""
        theta = np.asarray(theta, dtype=float)
        if self.rule is not None:
            return np.asarray(self.rule(theta), dtype=complex) * np.ones_like(theta)
        c = np.fft.fft(self.samples) / self.n
        k = np.fft.fftfreq(self.n, 1.0 / self.n)
        # split the Nyquist mode symmetrically so real data interpolate to real values
        nyq = self.n // 2
        half = c[nyq] / 2
        c = c.copy()
        c[nyq] = half
        k = np.append(k, nyq)
        c = np.append(c, half)
        return np.exp(1j * np.multiply.outer(theta, k)) @ c

    def resampled(self, n):
        """Samples at n uniform nodes (rule if available, else interpolation)."""
        if n == self.n:
            return self.samples
        return self(2 * np.pi * np.arange(n) / n)


@dataclass(frozen=True)
class DiskField:
    """A complex function on the open disk, given by a rule or a polar grid.

    Grid values have shape (len(radii), n_theta) with uniform angles starting
    at zero. ``envelope_exponent`` beta claims |g| (1-|z|^2)^beta is bounded.
    """

    rule: Optional[Callable] = None
    radii: Optional[np.ndarray] = None
    values: Optional[np.ndarray] = None
    envelope_exponent: Optional[float] = None
    _interp: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if self.rule is None and self.values is None:
            raise DomainError("DiskField needs a rule or grid values")
        if self.values is not None:
            radii = np.asarray(self.radii, dtype=float)
            vals = np.asarray(self.values, dtype=complex)
            if radii.ndim != 1 or vals.shape[0] != radii.shape[0] or vals.ndim != 2:
                raise DomainError("grid values must have shape (len(radii), n_theta)")
            if radii[0] < 0 or radii[-1] >= 1 or np.any(np.diff(radii) <= 0):
                raise DomainError("grid radii must be strictly increasing in [0, 1)")
            object.__setattr__(self, "radii", radii)
            object.__setattr__(self, "values", vals)
            if self.rule is None:
                object.__setattr__(self, "_interp", _polar_spline(radii, vals))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.rule is not None:
            return np.asarray(self.rule(z), dtype=complex) * np.ones_like(z)
        sre, sim = self._interp
        r = np.abs(z)
        th = np.mod(np.angle(z), 2 * np.pi)
        return sre.ev(r, th) + 1j * sim.ev(r, th)


def _polar_spline(radii, vals, pad=3):
    from scipy.interpolate import RectBivariateSpline

    nth = vals.shape[1]
    th = 2 * np.pi * np.arange(nth) / nth
    th_ext = np.concatenate([th[-pad:] - 2 * np.pi, th, th[:pad] + 2 * np.pi])
    v_ext = np.concatenate([vals[:, -pad:], vals, vals[:, :pad]], axis=1)
    k = min(3, len(radii) - 1)
    return (
        RectBivariateSpline(radii, th_ext, v_ext.real, kx=k, ky=3),
        RectBivariateSpline(radii, th_ext, v_ext.imag, kx=k, ky=3),
    )


def polar_field(fun, radii: Sequence[float], n_theta: int, envelope_exponent=None) -> DiskField:
    """Tabulate ``fun`` (scalar complex -> complex) on a polar grid and interpolate."""
    radii = np.asarray(radii, dtype=float)
    th = 2 * np.pi * np.arange(n_theta) / n_theta
    vals = np.empty((len(radii), n_theta), dtype=complex)
    for i, r in enumerate(radii):
        if r == 0.0:
            vals[i, :] = fun(0j)
            continue
        for j, t in enumerate(th):
            vals[i, j] = fun(r * np.exp(1j * t))
    return DiskField(radii=radii, values=vals, envelope_exponent=envelope_exponent)


@dataclass
class BoundReport:
    """Outcome of a numerically checked inequality or identity.

    ``ratio`` is LHS/RHS for inequalities, or the discrepancy for identities
    (``metric`` says which); ``passed`` is true iff max ratio <= ceiling.
    """

    name: str
    samples: list
    lhs: np.ndarray
    rhs: np.ndarray
    ratio: np.ndarray
    ceiling: float
    metric: str = "ratio"
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        self.lhs = np.asarray(self.lhs)
        self.rhs = np.asarray(self.rhs)
        self.ratio = np.asarray(self.ratio, dtype=float)

    @property
    def max_ratio(self) -> float:
        return float(np.max(self.ratio)) if self.ratio.size else 0.0

    @property
    def passed(self) -> bool:
        return bool(np.all(np.isfinite(self.ratio))) and self.max_ratio <= self.ceiling

    def rows(self):
        for s, l, r, q in zip(self.samples, self.lhs, self.rhs, self.ratio):
            yield {"sample": s, "lhs": l, "rhs": r, self.metric: q}


THREADS_ENV = "ALPHA_DISK_THREADS"


def thread_count() -> int:
    """Worker cap from ALPHA_DISK_THREADS (default 1)."""
    import os

    try:
        n = int(os.environ.get(THREADS_ENV, "1"))
    except ValueError:
        n = 1
    return max(1, n)


def map_points(fn, items):
    """map(fn, items) in input order, on up to thread_count() threads."""
    n = thread_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))
