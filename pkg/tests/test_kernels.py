"""Kernel-level contracts: closed-form anchors at alpha = 1, scaling
relations, symmetries, the gradient identity, mass normalization and the
time-fractional evolution equation."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from stabletail.errors import DomainError
from stabletail.kernels import (
    KappaOrder,
    StableParams,
    density,
    frac_gradient_density,
    frac_laplacian_density,
    gradient_identity_residual,
    gradient_profile,
    gradient_vector,
    laplacian_profile,
    laplacian_profile_detailed,
)
from stabletail.oracle import cauchy_derivative


class TestKappaOrder:
    def test_reduction(self):
        k = KappaOrder(2, 4)
        assert (k.num, k.den) == (1, 2)
        k = KappaOrder(-6, -4)
        assert (k.num, k.den) == (3, 2)

    def test_parity_exact(self):
        assert KappaOrder(2).is_even_integer
        assert KappaOrder(0).is_even_integer
        assert KappaOrder(3).is_odd_integer
        assert not KappaOrder(1, 2).is_integer
        assert not KappaOrder(4, 2).is_odd_integer  # reduces to 2

    def test_coerce_rejects_floats(self):
        with pytest.raises(DomainError):
            KappaOrder.coerce(0.5)

    def test_parse(self):
        assert KappaOrder.parse("-3/1") == KappaOrder(-3)
        assert KappaOrder.parse("7/2").value == 3.5
        with pytest.raises(DomainError):
            KappaOrder.parse("0.5")

    @given(num=st.integers(-40, 40), den=st.integers(1, 24))
    @settings(max_examples=120, deadline=None)
    def test_parity_exclusive(self, num, den):
        k = KappaOrder(num, den)
        assert not (k.is_even_integer and k.is_odd_integer)
        if k.is_integer:
            assert k.is_even_integer != k.is_odd_integer


class TestLaplacianProfile:
    def test_cauchy_at_unit_radius(self):
        assert laplacian_profile(1, 1.0, 0, 1.0) == pytest.approx(
            1.0 / (2.0 * math.pi), rel=1e-10
        )

    def test_origin_closed_forms(self):
        assert laplacian_profile(1, 1.0, 0, 0.0) == pytest.approx(1.0 / math.pi, rel=1e-14)
        assert laplacian_profile(3, 1.0, 0, 0.0) == pytest.approx(
            1.0 / math.pi**2, rel=1e-14
        )

    def test_origin_formula_matches_small_radius_limit(self):
        for (d, alpha, kappa) in [(2, 1.3, Fraction(1, 2)), (3, 0.8, Fraction(-1, 2))]:
            at0 = laplacian_profile(d, alpha, kappa, 0.0)
            near0 = laplacian_profile(d, alpha, kappa, 1e-4, 1e-11)
            assert near0 == pytest.approx(at0, rel=1e-4)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            laplacian_profile(2, 1.0, -2, 1.0)
        with pytest.raises(DomainError):
            laplacian_profile(1, 1.0, 0, -1.0)

    def test_radiality_through_interface(self):
        # the profile is a function of the radius alone by construction;
        # rotating a point cannot change the input it receives
        prof = laplacian_profile_detailed(2, 1.2, Fraction(1, 2), 2.5)
        assert prof.err_estimate < 1e-7 * abs(prof.value) + 1e-15


class TestGradientKernel:
    def test_unit_order_cauchy(self):
        v = gradient_vector(1, 1.0, 1, [1.0])
        assert abs(v[0] - 1j / (2.0 * math.pi)) < 1e-10

    def test_zero_at_origin(self):
        assert np.all(gradient_vector(3, 1.4, Fraction(1, 2), [0.0, 0.0, 0.0]) == 0)

    def test_rotational_structure(self):
        v = gradient_vector(3, 1.5, Fraction(1, 2), [2.0, 0.0, 0.0])
        assert v[1] == 0 and v[2] == 0
        assert v[0].real == 0.0 and v[0].imag != 0.0

    def test_matches_derivative_oracle(self):
        # gradient kernel = -i d/dx of the density at unit scale (d = 1)
        for x in (0.4, 1.0, 2.5, 6.0):
            got = gradient_vector(1, 1.0, 1, [x], 1e-10)[0]
            want = -1j * cauchy_derivative(1.0, 1.0, x, 1)
            assert abs(got - want) < 1e-8

    def test_domain(self):
        with pytest.raises(DomainError):
            gradient_profile(1, 1.0, 0, 1.0)  # needs kappa > -d + 1 = 0


class TestDensity:
    def test_cauchy_anchor(self):
        p = StableParams(1, 1.0, 1.0)
        assert density(p, 1.0, 0.0, 0.0) == pytest.approx(1.0 / math.pi, rel=1e-12)

    def test_scaled_cauchy(self):
        p = StableParams(1, 1.0, 2.0)
        assert density(p, 3.0, 4.0, 0.0) == pytest.approx(
            6.0 / (52.0 * math.pi), rel=1e-10
        )

    def test_symmetry_in_arguments(self):
        p = StableParams(2, 1.3, 0.7)
        a = density(p, 0.8, [1.0, -0.5], [0.2, 0.4])
        b = density(p, 0.8, [0.2, 0.4], [1.0, -0.5])
        assert a == pytest.approx(b, rel=1e-12)

    @given(
        alpha=st.floats(0.5, 1.9),
        t=st.floats(0.1, 5.0),
        r=st.floats(0.0, 20.0),
    )
    @settings(max_examples=25, deadline=None)
    def test_positive(self, alpha, t, r):
        p = StableParams(1, alpha, 1.0)
        assert density(p, t, r, 0.0, 1e-7) > 0.0

    def test_rejects_nonpositive_t(self):
        p = StableParams(1, 1.0, 1.0)
        with pytest.raises(DomainError):
            density(p, 0.0, 0.0, 0.0)

    def test_rejects_wrong_point_length(self):
        p = StableParams(2, 1.0, 1.0)
        with pytest.raises(DomainError):
            density(p, 1.0, [1.0, 2.0, 3.0], [0.0, 0.0])


class TestFracLaplacian:
    def test_order_zero_is_density(self):
        p = StableParams(2, 1.4, 1.3)
        x, y = [0.7, -0.2], [0.0, 0.1]
        assert frac_laplacian_density(p, 0, 0.9, x, y) == pytest.approx(
            density(p, 0.9, x, y), rel=1e-13
        )

    def test_second_order_is_negative_laplacian(self):
        # symbol |lambda|^2: equals -g'' in one dimension
        p = StableParams(1, 1.0, 1.0)
        assert frac_laplacian_density(p, 2, 1.0, 0.0, 0.0) == pytest.approx(
            2.0 / math.pi, rel=1e-11
        )
        for x in (0.5, 1.0, 3.0):
            got = frac_laplacian_density(p, 2, 1.0, x, 0.0)
            assert got == pytest.approx(-cauchy_derivative(1.0, 1.0, x, 2), rel=1e-10)

    def test_unit_scale_reduces_to_profile(self):
        p = StableParams(2, 1.2, 1.0)
        kappa = Fraction(1, 2)
        for r in (0.5, 2.0, 10.0):
            lhs = frac_laplacian_density(p, kappa, 1.0, [r, 0.0], [0.0, 0.0])
            rhs = laplacian_profile(2, 1.2, kappa, r)
            assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_scaling_consistency(self):
        # (ct)^{-(d+kappa)/alpha} times the rescaled profile, to 1e-12
        p = StableParams(3, 1.5, 2.0)
        kappa = Fraction(3, 2)
        t, r = 2.5, 3.0
        ct = p.c * t
        rho = r * ct ** (-1.0 / p.alpha)
        lhs = frac_laplacian_density(p, kappa, t, [r, 0, 0], [0, 0, 0])
        rhs = ct ** (-(p.d + 1.5) / p.alpha) * laplacian_profile(3, 1.5, kappa, rho)
        assert lhs == pytest.approx(rhs, rel=1e-12)


class TestFracGradient:
    def test_unit_order_matches_spatial_gradient(self):
        p = StableParams(1, 1.0, 1.0)
        got = frac_gradient_density(p, 1, 1.0, 1.0, 0.0)[0]
        assert abs(got - 1j / (2.0 * math.pi)) < 1e-10

    def test_coincident_points_vanish(self):
        p = StableParams(2, 1.1, 1.0)
        assert np.all(frac_gradient_density(p, 1, 1.0, [0.3, 0.4], [0.3, 0.4]) == 0)

    def test_parallel_to_displacement(self):
        p = StableParams(3, 1.5, 1.0)
        u = np.array([1.0, -2.0, 0.5])
        vec = frac_gradient_density(p, Fraction(1, 2), 1.0, u, [0.0, 0.0, 0.0])
        cross = np.cross(np.imag(vec), u)
        assert np.max(np.abs(cross)) < 1e-12 * np.max(np.abs(np.imag(vec)))
        assert np.max(np.abs(np.real(vec))) == 0.0


class TestGradientIdentity:
    @pytest.mark.parametrize("case", [
        (1, 1.0, KappaOrder(1), [1.0]),
        (3, 1.5, KappaOrder(1, 2), [1.0, 1.0, 1.0]),
        (2, 0.8, KappaOrder(3, 2), [0.0, 2.0]),
    ])
    def test_residual_small(self, case):
        d, alpha, kappa, x = case
        assert gradient_identity_residual(d, alpha, kappa, x, 1e-10) <= 1e-8

    def test_requires_off_origin(self):
        with pytest.raises(DomainError):
            gradient_identity_residual(2, 1.0, 1, [0.0, 0.0])


def _mass(d: int, alpha: float, R: float = 1000.0, tol: float = 1e-9) -> float:
    """Total mass of the unit-scale density: radial quadrature to R plus
    a tail completed with the envelope constant fitted near R (the
    bilateral density bounds guarantee the tail has that shape)."""
    surface = 2.0 * math.pi ** (0.5 * d) / math.gamma(0.5 * d)

    def radial(u):
        rho = math.exp(u)
        return rho**d * laplacian_profile(d, alpha, 0, rho, tol)

    total = 0.0
    for (a, b) in [(-12.0, 0.0), (0.0, math.log(R))]:
        v, _ = quad(radial, a, b, limit=300, epsrel=1e-9)
        total += v
    fitted = sum(
        r ** (d + alpha) * laplacian_profile(d, alpha, 0, r, tol)
        for r in (0.5 * R, 0.75 * R, R)
    ) / 3.0
    tail = surface * fitted * R ** (-alpha) / alpha
    return surface * total + tail


class TestNormalization:
    @pytest.mark.parametrize("d", [1, 2, 3])
    @pytest.mark.parametrize("alpha", [0.7, 1.0, 1.5])
    def test_unit_mass(self, d, alpha):
        assert abs(_mass(d, alpha) - 1.0) <= 1e-4


class TestEvolutionEquation:
    @pytest.mark.parametrize("case", [
        (1, 1.0, Fraction(1), 0.5, 1.0, 1.0),
        (2, 0.7, Fraction(7, 10), 1.0, 0.0, 1.0),
        (3, 1.5, Fraction(3, 2), 2.0, 3.0, 2.0),
    ])
    def test_time_derivative_matches_generator(self, case):
        d, alpha, kal, t, r, c = case
        p = StableParams(d, alpha, c)
        x = [r] + [0.0] * (d - 1)
        y = [0.0] * d
        h = 1e-5 * t
        dgdt = (density(p, t + h, x, y, 1e-12) - density(p, t - h, x, y, 1e-12)) / (2 * h)
        lap = frac_laplacian_density(p, kal, t, x, y, 1e-12)
        assert abs(dgdt + c * lap) <= 1e-5 * abs(dgdt)
