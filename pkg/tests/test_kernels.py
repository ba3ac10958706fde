import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alphadisk.core import DomainError, SingularityError
from alphadisk.kernels import (
    GreenEvalConfig,
    green_alpha,
    green_dw_bound,
    green_dwbar_bound,
    h_alpha,
    h_alpha_quad,
    mobius,
    poisson_kernel_alpha,
    pseudo_hyperbolic,
    v_kernel,
)

TWO_PI = 2 * np.pi


def disk(rng, n, rmax=0.98):
    return rmax * np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))


points = st.builds(
    lambda r, t: r * np.exp(1j * t),
    st.floats(0.0, 0.97),
    st.floats(0.0, 2 * np.pi),
)


@pytest.mark.parametrize(
    "z, w, q", [(0.0, 0.7, 0.7), (0.5, -0.5, 0.8), (0.3 + 0.1j, 0.3 + 0.1j, 0.0)]
)
def test_pseudo_hyperbolic_examples(z, w, q):
    assert pseudo_hyperbolic(z, w) == pytest.approx(q, abs=1e-15)


def test_mobius_examples():
    w = 0.4 - 0.3j
    assert abs(mobius(w, w)) < 1e-16
    assert mobius(w, 0.0) == pytest.approx(w)
    assert mobius(0.5, 0.2) == pytest.approx(0.3 / 0.9, rel=1e-15)


@settings(max_examples=60, deadline=None)
@given(points, points, points)
def test_mobius_invariance_of_q(a, z, w):
    if abs(z - w) < 1e-6:
        return
    q = pseudo_hyperbolic(z, w)
    assert pseudo_hyperbolic(mobius(a, z), mobius(a, w)) == pytest.approx(q, rel=1e-9, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(points, points)
def test_mobius_involution(w, z):
    assert abs(mobius(w, mobius(w, z)) - z) < 1e-12


def test_change_of_variables_identities():
    rng = np.random.default_rng(11)
    for w, zeta in zip(disk(rng, 30, 0.95), disk(rng, 30, 0.95)):
        z = mobius(w, zeta)
        assert z == pytest.approx((w - zeta) / (1 - np.conj(w) * zeta))
        assert 1 - np.conj(w) * z == pytest.approx((1 - abs(w) ** 2) / (1 - np.conj(w) * zeta))
        # Jacobian of zeta -> phi_w(zeta) by central differences (real 2x2 determinant)
        h = 1e-6
        dx = (mobius(w, zeta + h) - mobius(w, zeta - h)) / (2 * h)
        dy = (mobius(w, zeta + 1j * h) - mobius(w, zeta - 1j * h)) / (2 * h)
        jac = abs(dx.real * dy.imag - dx.imag * dy.real)
        assert jac == pytest.approx((1 - abs(w) ** 2) ** 2 / abs(1 - np.conj(w) * zeta) ** 4, rel=1e-7)
        assert abs(1 - np.conj(w) * zeta) >= 1 - abs(w)
        assert abs(1 - np.conj(w) * zeta) >= 1 - abs(zeta)


class TestH:
    @pytest.mark.parametrize("a", [0.0, 0.5, 1.0, 3.0, -0.5])
    def test_h_at_one_is_zero(self, a):
        assert h_alpha(1.0, a) == 0.0

    def test_examples(self):
        assert h_alpha(0.5, 0.0) == pytest.approx(np.log(2), rel=1e-14)
        assert h_alpha(0.5, 1.0) == pytest.approx(0.5 * (-0.75 - np.log(0.25)), rel=1e-14)

    @pytest.mark.parametrize("a", [-0.9, -0.5, 0.0, 0.3, 1.0, 1.7, 4.0, 10.0])
    @pytest.mark.parametrize("r", [1e-8, 0.01, 0.3, 0.69, 0.71, 0.9, 0.999, 1 - 1e-7])
    def test_against_adaptive_quadrature(self, a, r):
        assert h_alpha(r, a) == pytest.approx(h_alpha_quad(r, a), rel=1e-12, abs=1e-300)

    @pytest.mark.parametrize("a", [0.0, 1.0, 2.5])
    def test_decreasing(self, a):
        r = np.linspace(1e-6, 1.0, 2000)
        assert np.all(np.diff(h_alpha(r, a)) < 0)

    @pytest.mark.parametrize("a", [0.5, 2.0])
    def test_log_split_remainder_bounded(self, a):
        r = 10.0 ** -np.arange(1, 200, 7)
        rem = h_alpha(r, a) + np.log(r)
        assert np.ptp(rem[r < 1e-3]) < 1e-12

    @pytest.mark.parametrize("r", [0.0, -0.1, 1.1])
    def test_domain(self, r):
        with pytest.raises(DomainError):
            h_alpha(r, 1.0)


class TestPoissonKernels:
    @pytest.mark.parametrize("a", [-0.5, 0.0, 1.0, 2.7])
    def test_at_origin(self, a):
        assert poisson_kernel_alpha(0.0, a) == pytest.approx(1.0)
        assert v_kernel(0.0, 1.3, a) == pytest.approx(1.0)

    def test_examples(self):
        assert poisson_kernel_alpha(0.5, 0.0) == pytest.approx(3.0)
        expect = 0.75 ** 2 / ((1 - 0.5j) * (1 + 0.5j) ** 2)
        assert poisson_kernel_alpha(0.5j, 1.0) == pytest.approx(expect, rel=1e-14)
        assert v_kernel(0.5, 0.0, 1.0) == pytest.approx(4.5, rel=1e-14)

    def test_v_kernel_alpha_zero_is_classical(self):
        rng = np.random.default_rng(4)
        for w, th in zip(disk(rng, 20), rng.uniform(0, TWO_PI, 20)):
            xi = w * np.exp(-1j * th)
            assert v_kernel(w, th, 0.0) == pytest.approx((1 - abs(xi) ** 2) / abs(1 - xi) ** 2, rel=1e-13)

    def test_v_kernel_is_conjugate_of_p(self):
        rng = np.random.default_rng(5)
        for w, th in zip(disk(rng, 20), rng.uniform(0, TWO_PI, 20)):
            assert v_kernel(w, th, 1.3) == pytest.approx(np.conj(poisson_kernel_alpha(w * np.exp(-1j * th), 1.3)))


class TestGreen:
    def test_alpha_zero_closed_form(self):
        rng = np.random.default_rng(6)
        z, w = disk(rng, 1000), disk(rng, 1000)
        q = pseudo_hyperbolic(z, w)
        keep = q > 1e-6
        g = green_alpha(z[keep], w[keep], 0.0)
        np.testing.assert_allclose(g.imag, 0.0, atol=0)
        np.testing.assert_allclose(g.real, np.log(1 / q[keep]) / TWO_PI, rtol=0, atol=1e-12)

    def test_example_alpha_one(self):
        # h_1(1/2) / 2pi with h_1(1/2) = (log 4 - 3/4) / 2
        assert green_alpha(0.0, 0.5, 1.0) == pytest.approx(0.0506347, abs=5e-8)

    def test_diagonal(self):
        with pytest.raises(SingularityError):
            green_alpha(0.5, 0.5, 1.0)
        with pytest.raises(SingularityError):
            green_dwbar_bound(0.5, 0.5, 1.0)

    def test_vanishes_at_rim(self):
        vals = [abs(green_alpha(r, 0.2j, 1.5)) for r in (0.9, 0.99, 0.999, 0.9999)]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 1e-6

    def test_principal_branch_complex(self):
        g = green_alpha(0.5j, 0.6, 0.5)
        h = h_alpha(pseudo_hyperbolic(0.5j, 0.6), 0.5)
        assert g == pytest.approx((1 - np.conj(0.5j) * 0.6) ** 0.5 * h / TWO_PI)
        assert abs(g.imag) > 0


class TestBounds:
    def test_dwbar_example(self):
        assert green_dwbar_bound(0.0, 0.5, 1.0) == pytest.approx(0.75 / TWO_PI, rel=1e-14)

    def test_dw_alpha_zero_is_dwbar(self):
        z, w = 0.3 + 0.2j, -0.4j
        expect = (1 - abs(z) ** 2) / (2 * TWO_PI * abs(1 - z * np.conj(w)) * abs(z - w))
        assert green_dw_bound(z, w, 0.0) == pytest.approx(expect, rel=1e-14)
        assert green_dwbar_bound(z, w, 0.0) == pytest.approx(expect, rel=1e-14)

    def test_dw_example(self):
        x = 0.75
        first = 1.0 * 1.0 * x ** 2 * (1 - np.log(0.25))
        second = 0.75 / (2 * 0.5)
        assert green_dw_bound(0.0, 0.5, 1.0) == pytest.approx((first + second) / TWO_PI, rel=1e-14)

    def test_c_alpha_scales_first_term(self):
        z, w = 0.1, 0.6j
        base = green_dw_bound(z, w, 1.0, GreenEvalConfig(1.0))
        two = green_dw_bound(z, w, 1.0, GreenEvalConfig(2.0))
        assert two - base == pytest.approx(base - green_dwbar_bound(z, w, 1.0))

    def test_dw_needs_nonnegative_alpha(self):
        with pytest.raises(DomainError):
            green_dw_bound(0.1, 0.2, -0.5)

    def test_first_term_vanishes_as_q_to_one(self):
        w = 0.0
        for z in (0.9, 0.999, 0.99999):
            first = green_dw_bound(z, w, 1.0) - green_dwbar_bound(z, w, 1.0)
        assert first < 1e-8

    @pytest.mark.parametrize("a", [0.0, 0.5, 1.0, 2.0, 5.0])
    def test_h_below_first_term_shape(self, a):
        # h(q) <= (1-q^2)^(a+1) (1 - log q^2): why C_alpha = 1 is a safe default
        q = np.linspace(1e-6, 1 - 1e-9, 5000)
        assert np.all(h_alpha(q, a) <= (1 - q ** 2) ** (a + 1) * (1 - np.log(q ** 2)))
