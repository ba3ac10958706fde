import numpy as np
import pytest
import sympy as sp

from alphadisk.core import (
    BoundarySignal,
    DiskField,
    IntegrabilityError,
    QuadratureSpec,
    StepError,
)
from alphadisk.kernels import poisson_kernel_alpha
from alphadisk.solver import (
    DirichletProblem,
    apply_l_alpha,
    apply_lbar_alpha,
    boundary_part,
    green_potential,
    probe_envelope,
    solve,
)


def sig(f, n=256):
    return BoundarySignal.from_rule(f, n)


ZERO_F = sig(lambda t: np.zeros_like(t))
ONE_F = sig(lambda t: np.ones_like(t))
ZERO_G = DiskField(rule=lambda z: np.zeros_like(z), envelope_exponent=0.0)
ONE_G = DiskField(rule=lambda z: np.ones_like(z), envelope_exponent=0.0)
MANUFACTURED = DiskField(rule=lambda z: (1 - np.abs(z) ** 2) ** -2.0, envelope_exponent=2.0)


def ring(radii, n=5, phase=0.3):
    th = 2 * np.pi * np.arange(n) / n + phase
    return np.multiply.outer(np.asarray(radii), np.exp(1j * th)).ravel()


class TestProblem:
    def test_integrability_gate(self):
        g = DiskField(rule=lambda z: (1 - np.abs(z) ** 2) ** -3.0, envelope_exponent=3.0)
        with pytest.raises(IntegrabilityError):
            DirichletProblem(1.0, ZERO_F, g)

    def test_probe_refutes_understated_envelope(self):
        g = DiskField(rule=lambda z: (1 - np.abs(z) ** 2) ** -2.0, envelope_exponent=1.0)
        with pytest.raises(IntegrabilityError):
            DirichletProblem(1.0, ZERO_F, g)

    def test_probe_without_declared_envelope(self):
        DirichletProblem(1.0, ZERO_F, DiskField(rule=lambda z: (1 - np.abs(z) ** 2) ** -1.5))
        with pytest.raises(IntegrabilityError):
            DirichletProblem(1.0, ZERO_F, DiskField(rule=lambda z: (1 - np.abs(z) ** 2) ** -2.5))

    def test_probe_report(self):
        p = probe_envelope(lambda z: (1 - np.abs(z) ** 2) ** -1.0, 1.0)
        assert p.bounded and p.radii.size == 64
        assert not probe_envelope(lambda z: (1 - np.abs(z) ** 2) ** -1.0, 0.5).bounded


class TestBoundaryPart:
    @pytest.mark.parametrize("a", [-0.5, 0.0, 0.5, 1.0, 2.0])
    def test_constant_data(self, a):
        prob = DirichletProblem(a, sig(lambda t: np.ones_like(t), 4096), ZERO_G, QuadratureSpec(circle_nodes=4096))
        np.testing.assert_allclose(boundary_part(prob, ring([0.1, 0.5, 0.9, 0.95])), 1.0, atol=1e-8)

    def test_origin_gives_mean(self):
        prob = DirichletProblem(1.3, sig(lambda t: 0.5 + np.sin(2 * t)), ZERO_G)
        assert boundary_part(prob, 0.0) == pytest.approx(0.5, abs=1e-14)

    def test_classical_alpha_zero(self):
        prob = DirichletProblem(0.0, sig(np.cos), ZERO_G)
        w = ring([0.2, 0.6, 0.97])
        np.testing.assert_allclose(boundary_part(prob, w), w.real, atol=1e-12)


class TestGreenPotential:
    def test_zero_source(self):
        assert green_potential(DirichletProblem(1.0, ZERO_F, ZERO_G), 0.4j) == 0.0

    def test_alpha_zero_constant_source(self):
        prob = DirichletProblem(0.0, ZERO_F, ONE_G)
        w = ring([0.0, 0.5, 0.9], 3)
        np.testing.assert_allclose(green_potential(prob, w), 1 - np.abs(w) ** 2, atol=1e-10)

    def test_manufactured_at_origin(self):
        assert green_potential(DirichletProblem(1.0, ZERO_F, MANUFACTURED), 0.0) == pytest.approx(1.0, abs=1e-10)


def _manufactured_case(alpha):
    """u = (1 - z zbar)(z + 2 zbar^2 + 1j) vanishes on the circle; g = -Lbar_alpha u."""
    z, zb = sp.symbols("z zb")
    d = 1 - z * zb
    u = d * (z + 2 * zb ** 2 + sp.I)
    lbar = alpha * d ** (-alpha - 1) * z * sp.diff(u, z) + d ** (-alpha) * sp.diff(u, z, zb)
    g = sp.lambdify((z, zb), sp.simplify(-lbar), "numpy")
    uf = sp.lambdify((z, zb), u, "numpy")
    return (lambda w: uf(w, np.conj(w))), (lambda w: g(w, np.conj(w)) + 0j * w)


class TestSolve:
    def test_zero_source_is_boundary_part(self):
        prob = DirichletProblem(1.0, sig(np.cos), ZERO_G)
        rep = solve(prob, ring([0.3, 0.8]))
        np.testing.assert_array_equal(rep.u, rep.v)
        assert rep.ok

    def test_manufactured_radial(self):
        prob = DirichletProblem(1.0, ZERO_F, MANUFACTURED)
        w = ring([0.1, 0.5, 0.9], 4)
        rep = solve(prob, w, residual_points=w[:4])
        np.testing.assert_allclose(rep.u, 1 - np.abs(w) ** 2, atol=1e-10)
        assert rep.max_residual < 1e-6

    def test_superposition_alpha_zero(self):
        prob = DirichletProblem(0.0, sig(np.cos), ONE_G)
        w = ring([0.25, 0.75], 3)
        np.testing.assert_allclose(solve(prob, w).u, w.real + 1 - np.abs(w) ** 2, atol=1e-10)

    @pytest.mark.parametrize("alpha", [0.5, 1.7, -0.5])
    def test_manufactured_nonradial_complex(self, alpha):
        u, g = _manufactured_case(alpha)
        prob = DirichletProblem(alpha, ZERO_F, DiskField(rule=g))
        w = np.array([0.3 + 0.1j, -0.5j, 0.7 - 0.2j])
        rep = solve(prob, w, residual_points=w[:1])
        np.testing.assert_allclose(rep.u, u(w), atol=1e-8)
        assert rep.max_residual < 1e-3

    def test_linearity(self):
        f1, f2 = sig(np.cos), sig(lambda t: np.sin(2 * t) + 0.5j)
        g1 = DiskField(rule=lambda z: np.ones_like(z), envelope_exponent=0.0)
        g2 = DiskField(rule=lambda z: z * (1 - np.abs(z) ** 2) ** -1.0, envelope_exponent=1.0)
        gs = DiskField(rule=lambda z: g1(z) + g2(z), envelope_exponent=1.0)
        fs = sig(lambda t: f1(t) + f2(t))
        w = np.array([0.2 + 0.3j, -0.6])
        a = solve(DirichletProblem(0.8, f1, g1), w).u + solve(DirichletProblem(0.8, f2, g2), w).u
        b = solve(DirichletProblem(0.8, fs, gs), w).u
        np.testing.assert_allclose(a, b, atol=1e-8)

    def test_failures_are_collected(self):
        # tolerances below round-off make every refinement check fail
        strict = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-300)
        prob = DirichletProblem(1.0, ZERO_F, MANUFACTURED, strict)
        rep = solve(prob, [0.3, 0.5j])
        assert not rep.ok
        idx, msg = rep.failures[0]
        assert msg.startswith("ToleranceError")
        assert np.isnan(rep.u[idx])


class TestOperators:
    def test_constant(self):
        one = DiskField(rule=lambda z: np.ones_like(z))
        assert apply_lbar_alpha(one, 0.3j, 1.0, 1e-3) == pytest.approx(0.0, abs=1e-9)
        assert apply_l_alpha(one, 0.3j, 1.0, 1e-3) == pytest.approx(0.0, abs=1e-9)

    def test_quadratic_example(self):
        u = DiskField(rule=lambda z: 1 - np.abs(z) ** 2)
        assert apply_lbar_alpha(u, 0.5, 1.0, 1e-3) == pytest.approx(-16 / 9, rel=1e-6)

    @pytest.mark.parametrize("a", [0.0, 0.7, 2.0])
    def test_analytic_and_antianalytic(self, a):
        z = 0.4 - 0.3j
        d = 1 - abs(z) ** 2
        lb = apply_lbar_alpha(DiskField(rule=lambda x: x ** 2), z, a, 1e-3)
        assert lb == pytest.approx(a * d ** (-a - 1) * z * 2 * z, rel=1e-6, abs=1e-9)
        l = apply_l_alpha(DiskField(rule=lambda x: np.conj(x) ** 2), z, a, 1e-3)
        assert l == pytest.approx(a * d ** (-a - 1) * np.conj(z) * 2 * np.conj(z), rel=1e-6, abs=1e-9)

    def test_conjugation_law(self):
        rng = np.random.default_rng(9)
        u = lambda x: np.exp(x) * np.conj(x) + x ** 3 * np.conj(x) ** 2
        ubar = DiskField(rule=lambda x: np.conj(u(x)))
        for z in 0.7 * np.sqrt(rng.uniform(size=10)) * np.exp(2j * np.pi * rng.uniform(size=10)):
            lhs = apply_l_alpha(DiskField(rule=u), z, 1.3, 1e-3)
            rhs = np.conj(apply_lbar_alpha(ubar, z, 1.3, 1e-3))
            assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)

    @pytest.mark.parametrize("theta", [0.0, 1.0, 4.0])
    def test_alpha_poisson_kernel_is_alpha_harmonic(self, theta):
        a = 1.5
        kern = DiskField(rule=lambda z: poisson_kernel_alpha(z * np.exp(-1j * theta), a))
        rng = np.random.default_rng(10)
        for z in 0.6 * np.sqrt(rng.uniform(size=8)) * np.exp(2j * np.pi * rng.uniform(size=8)):
            scale = abs(poisson_kernel_alpha(z * np.exp(-1j * theta), a))
            assert abs(apply_l_alpha(kern, z, a, 1e-3)) < 1e-3 * max(scale, 1.0)

    def test_step_limits(self):
        u = DiskField(rule=lambda z: z)
        with pytest.raises(StepError):
            apply_lbar_alpha(u, 0.9, 1.0, 0.05)
        with pytest.raises(StepError):
            apply_lbar_alpha(u, 0.1, 1.0, 0.0)
