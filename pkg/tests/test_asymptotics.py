"""Tail-constant contracts: closed forms, exact zero structure, the
degenerate-branch prefactor reconciliation against the alpha = 1
oracles, and numeric convergence of kernel tails to each constant."""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import kv

from stabletail.asymptotics import (
    Branch,
    gradient_constant,
    gradient_tail,
    gradient_tail_constant,
    gradient_tail_constant_odd,
    hankel_limit,
    k_bessel_moment,
    laplacian_constant,
    laplacian_tail,
    laplacian_tail_constant,
    laplacian_tail_constant_even,
)
from stabletail.errors import DomainError, ParityError
from stabletail.kernels import gradient_profile, laplacian_profile


class TestHankelLimit:
    def test_reflection_value(self):
        # (2/pi) Gamma(5/4) Gamma(3/4) cos(3 pi/4) = -1/2
        assert hankel_limit(1.0, -0.5) == pytest.approx(-0.5, rel=1e-13)

    def test_exact_zero_odd_difference(self):
        assert hankel_limit(0.5, -0.5) == 0.0
        assert hankel_limit(1.5, 0.5) == 0.0
        assert hankel_limit(4.0, 1.0) == 0.0

    def test_nonzero_elsewhere(self):
        for (nu, mu) in [(1.0, -0.5), (2.0, 0.0), (1.7, 0.5), (2.5, 0.5)]:
            if (nu - mu) != round(nu - mu) or int(round(nu - mu)) % 2 == 0:
                assert hankel_limit(nu, mu) != 0.0

    def test_zero_iff_odd_integer_difference(self):
        # nu and the quarter-step differences are exact binary floats, so
        # the odd-integer detection inside the closed form stays exact
        nu = 2.0
        for diff in np.arange(-2.0, 2.8, 0.25):
            mu = nu - float(diff)
            if not nu > abs(mu) - 1.0:
                continue
            val = hankel_limit(nu, mu)
            is_odd_int = diff == round(diff) and int(round(diff)) % 2 == 1
            assert (val == 0.0) == is_odd_int, (nu, mu, diff, val)

    def test_domain(self):
        with pytest.raises(DomainError):
            hankel_limit(0.4, 1.5)


class TestKBesselMoment:
    def test_prefactor_pinned_by_quadrature(self):
        # int_0^inf t K_0(t) dt: the 2^{nu-1} prefactor gives 1; the
        # alternative 2^nu bookkeeping would give 2.  Quadrature decides.
        oracle, _ = quad(lambda t: t * kv(0, t), 0.0, 60.0, limit=200)
        assert oracle == pytest.approx(1.0, abs=1e-9)
        assert k_bessel_moment(1.0, 0.0) == pytest.approx(oracle, rel=1e-9)
        assert abs(k_bessel_moment(1.0, 0.0) - 2.0) > 0.9

    def test_elementary_half_order(self):
        # K_{1/2}(t) = sqrt(pi/(2t)) e^{-t}: moment = sqrt(pi/2)
        assert k_bessel_moment(0.5, 0.5) == pytest.approx(
            math.sqrt(math.pi / 2.0), rel=1e-13
        )

    def test_second_moment(self):
        oracle, _ = quad(lambda t: t * t * kv(0, t), 0.0, 60.0, limit=200)
        assert k_bessel_moment(2.0, 0.0) == pytest.approx(math.pi / 2.0, rel=1e-13)
        assert oracle == pytest.approx(math.pi / 2.0, rel=1e-9)

    def test_domain(self):
        with pytest.raises(DomainError):
            k_bessel_moment(0.2, 1.5)


class TestLaplacianGeneric:
    def test_half_order_value(self):
        const = laplacian_tail_constant(1, 1.0, Fraction(1, 2))
        assert const.value == pytest.approx(-1.0 / math.sqrt(8.0 * math.pi), rel=1e-13)
        assert const.branch is Branch.LAPLACIAN_GENERIC
        assert const.decay_exponent == 1.5

    def test_alpha_free(self):
        a = laplacian_tail_constant(2, 0.6, Fraction(1, 2)).value
        b = laplacian_tail_constant(2, 1.9, Fraction(1, 2)).value
        assert a == b

    def test_even_integer_rejected(self):
        with pytest.raises(ParityError):
            laplacian_tail_constant(1, 1.0, 0)
        with pytest.raises(ParityError):
            laplacian_tail_constant(3, 1.2, 2)

    def test_sign_negative_for_small_positive_orders(self):
        # cos((kappa+1) pi/2) < 0 on (0, 1)
        for k in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
            assert laplacian_tail_constant(1, 1.0, k).value < 0.0

    def test_matches_hankel_limit_identity(self):
        # constant = (2 pi)^{-d/2} * limit(d/2 + kappa, d/2 - 1)
        for (d, k) in [(1, Fraction(1, 2)), (2, Fraction(-1, 2)),
                       (3, Fraction(3, 2)), (1, Fraction(1)), (3, Fraction(1))]:
            got = laplacian_tail_constant(d, 1.3, k).value
            want = (2.0 * math.pi) ** (-0.5 * d) * hankel_limit(
                0.5 * d + float(k), 0.5 * d - 1.0
            )
            assert got == pytest.approx(want, rel=1e-13)

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            laplacian_tail_constant(3, 1.0, Fraction(-5, 2))


class TestLaplacianEvenDegenerate:
    def test_base_order_recovers_density_tail(self):
        const = laplacian_tail_constant_even(1, 1.0, 0)
        assert const.value == pytest.approx(1.0 / math.pi, rel=1e-13)
        assert const.decay_exponent == pytest.approx(2.0)

    def test_order_two_value_pinned_by_cauchy_oracle(self):
        # Reconciliation mandated before freezing: radius^4 times the
        # kernel at (d=1, alpha=1, kappa=2).  The exact alpha=1 kernel is
        # (2 - 6 x^2) / (pi (1 + x^2)^3), whose tail is -6/pi; the
        # competing (alpha - kappa) bookkeeping would give +2/pi.
        const = laplacian_tail_constant_even(1, 1.0, 2)
        assert const.value == pytest.approx(-6.0 / math.pi, rel=1e-13)
        for radius in (50.0, 100.0, 200.0, 400.0):
            exact = (2.0 - 6.0 * radius**2) / (math.pi * (1.0 + radius**2) ** 3)
            ratio = exact * radius**4 / const.value
            assert abs(ratio - 1.0) < 4e-3
        # and the quadrature path agrees with the same pinned constant
        ratios = [
            laplacian_profile(1, 1.0, 2, r, 1e-10) * r**4 / const.value
            for r in (50.0, 100.0, 200.0, 400.0)
        ]
        assert abs(ratios[-1] - 1.0) < 2e-3
        assert abs(ratios[-1] - 1.0) < abs(ratios[0] - 1.0)
        rejected = 2.0 / math.pi
        assert abs(laplacian_profile(1, 1.0, 2, 400.0, 1e-10) * 400.0**4 / rejected - 1.0) > 2.0

    def test_parity_guard(self):
        with pytest.raises(ParityError):
            laplacian_tail_constant_even(1, 1.0, Fraction(1, 2))
        with pytest.raises(ParityError):
            laplacian_tail_constant_even(1, 1.0, 1)
        with pytest.raises(ParityError):
            laplacian_tail_constant_even(1, 1.0, -2)

    def test_decay_exponent(self):
        const = laplacian_tail_constant_even(3, 0.9, 4)
        assert const.decay_exponent == pytest.approx(3 + 0.9 + 4)
        assert const.branch is Branch.LAPLACIAN_EVEN


class TestGradientGeneric:
    def test_half_order_coefficient(self):
        const = gradient_tail_constant(1, 1.0, Fraction(1, 2))
        # directional tail coefficient is -value and must be positive here
        assert -const.value == pytest.approx(1.0 / math.sqrt(8.0 * math.pi), rel=1e-13)
        assert const.decay_exponent == 2.5

    def test_odd_integer_rejected(self):
        with pytest.raises(ParityError):
            gradient_tail_constant(1, 1.0, 1)

    def test_numeric_tail_ratio(self):
        # d=1, kappa=1/2: radial gradient component against the constant
        const = gradient_tail_constant(1, 1.5, Fraction(1, 2))
        for radius, tol_rel in ((200.0, 0.02), (400.0, 0.01)):
            n_val = gradient_profile(1, 1.5, Fraction(1, 2), radius, 1e-10)
            ratio = n_val * radius ** (const.decay_exponent - 1.0) / (-const.value)
            assert abs(ratio - 1.0) < tol_rel

    def test_zero_order_against_closed_form(self):
        # kappa = 0 is admissible for d >= 2 only
        const = gradient_constant(3, 1.2, 0)
        n_val = gradient_profile(3, 1.2, 0, 200.0, 1e-10)
        ratio = n_val * 200.0 ** (const.decay_exponent - 1.0) / (-const.value)
        assert abs(ratio - 1.0) < 0.02

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            gradient_tail_constant(1, 1.0, Fraction(-1, 2))


class TestGradientOddDegenerate:
    def test_unit_order_pinned_by_cauchy_oracle(self):
        # Reconciliation: the alpha = 1 gradient tail is 2/(pi x^3)
        # directionally, so the notation constant is -2/pi; the competing
        # (d+kappa-1)(alpha-kappa+1) bookkeeping would give -1/pi.
        const = gradient_tail_constant_odd(1, 1.0, 1)
        assert const.value == pytest.approx(-2.0 / math.pi, rel=1e-13)
        assert const.decay_exponent == pytest.approx(4.0)
        for radius in (100.0, 300.0):
            n_val = gradient_profile(1, 1.0, 1, radius, 1e-10)
            ratio = n_val * radius**3 / (-const.value)
            assert abs(ratio - 1.0) < 0.01
        n_val = gradient_profile(1, 1.0, 1, 300.0, 1e-10)
        assert abs(n_val * 300.0**3 / (1.0 / math.pi) - 2.0) < 0.05

    def test_small_alpha_shrinks_coefficient(self):
        # the (alpha + kappa - 1) factor vanishes as alpha -> 0 at kappa=1
        small = abs(gradient_tail_constant_odd(1, 0.01, 1).value)
        assert small < 0.02

    def test_sign_bookkeeping_d3(self):
        # cos((alpha + kappa) pi / 2) < 0 at alpha = 1, kappa = 1
        assert gradient_tail_constant_odd(3, 1.0, 1).value < 0.0

    def test_parity_guard(self):
        with pytest.raises(ParityError):
            gradient_tail_constant_odd(1, 1.0, 2)
        with pytest.raises(ParityError):
            gradient_tail_constant_odd(1, 1.0, Fraction(3, 2))


class TestDispatchAndTails:
    def test_branch_exclusivity(self):
        for num in range(-1, 8):
            for den in (1, 2, 3):
                k = Fraction(num, den)
                if not float(k) > -1.0:
                    continue
                const = laplacian_constant(1, 1.1, k)
                expect_even = k.denominator == 1 and k.numerator % 2 == 0 and k >= 0
                assert (const.branch is Branch.LAPLACIAN_EVEN) == expect_even
                if float(k) > 0.0:
                    gconst = gradient_constant(1, 1.1, k)
                    expect_odd = k.denominator == 1 and k.numerator % 2 == 1
                    assert (gconst.branch is Branch.GRADIENT_ODD) == expect_odd

    def test_tail_dispatch_even(self):
        const = laplacian_constant(1, 1.0, 2)
        assert const.branch is Branch.LAPLACIAN_EVEN

    def test_tail_value_cauchy(self):
        assert laplacian_tail(1, 1.0, 0, 100.0) == pytest.approx(
            1.0 / (math.pi * 100.0**2), rel=1e-12
        )

    def test_numeric_convergence_improves_with_radius(self):
        for (d, alpha, k) in [(1, 1.5, Fraction(1, 2)), (2, 1.0, Fraction(1, 2)),
                              (1, 1.0, Fraction(3, 2))]:
            const = laplacian_constant(d, alpha, k)
            devs = []
            for radius in (50.0, 200.0):
                v = laplacian_profile(d, alpha, k, radius, 1e-10)
                devs.append(abs(v * radius**const.decay_exponent / const.value - 1.0))
            assert devs[1] < devs[0]

    def test_gradient_tail_sign_convention(self):
        # the directional tail of Im(kernel . xhat) uses -value
        k = Fraction(1, 2)
        tail = gradient_tail(1, 1.5, k, 200.0)
        n_val = gradient_profile(1, 1.5, k, 200.0, 1e-10)
        assert tail == pytest.approx(n_val, rel=0.02)
