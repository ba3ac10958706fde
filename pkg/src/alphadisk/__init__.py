"""Numerics for the alpha-weighted Poisson equation on the unit disk."""

__version__ = "0.1.0"

from .core import (
    DEFAULT_SPEC,
    AlphaDiskError,
    AlphaWeight,
    BoundarySignal,
    BoundReport,
    DegeneratePairError,
    DiskField,
    DiskPoint,
    DomainError,
    EnvelopeError,
    IntegrabilityError,
    MarginError,
    NonFiniteError,
    QuadratureSpec,
    SingularityError,
    StepError,
    ToleranceError,
    polar_field,
)
from .estimates import (
    circle_power_integral,
    compute_I1,
    compute_I2,
    compute_M1,
    grin_lip_sweep,
    lipschitz_quotient,
    verify_green_derivative_bounds,
)
from .kernels import (
    GreenEvalConfig,
    green_alpha,
    green_dw_bound,
    green_dwbar_bound,
    h_alpha,
    mobius,
    poisson_kernel_alpha,
    pseudo_hyperbolic,
    v_kernel,
)
from .quadrature import integrate_circle, integrate_disk, integrate_disk_mobius, integrate_disk_recentered
from .solver import DirichletProblem, SolveReport, apply_l_alpha, apply_lbar_alpha, solve
from .transforms import (
    alpha_poisson_extend,
    hardy_mean,
    hardy_norm,
    hilbert_transform,
    poisson_extend,
    s_operator,
)

__all__ = [
    "AlphaDiskError",
    "AlphaWeight",
    "BoundReport",
    "BoundarySignal",
    "DEFAULT_SPEC",
    "DegeneratePairError",
    "DirichletProblem",
    "DiskField",
    "DiskPoint",
    "DomainError",
    "EnvelopeError",
    "GreenEvalConfig",
    "IntegrabilityError",
    "MarginError",
    "NonFiniteError",
    "QuadratureSpec",
    "SingularityError",
    "SolveReport",
    "StepError",
    "ToleranceError",
    "alpha_poisson_extend",
    "apply_l_alpha",
    "apply_lbar_alpha",
    "circle_power_integral",
    "compute_I1",
    "compute_I2",
    "compute_M1",
    "green_alpha",
    "green_dw_bound",
    "green_dwbar_bound",
    "grin_lip_sweep",
    "h_alpha",
    "hardy_mean",
    "hardy_norm",
    "hilbert_transform",
    "integrate_circle",
    "integrate_disk",
    "integrate_disk_mobius",
    "integrate_disk_recentered",
    "lipschitz_quotient",
    "mobius",
    "poisson_extend",
    "poisson_kernel_alpha",
    "polar_field",
    "pseudo_hyperbolic",
    "s_operator",
    "solve",
    "v_kernel",
    "verify_green_derivative_bounds",
]
