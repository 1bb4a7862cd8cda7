import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from tscarma.errors import ConvergenceError, DomainError
from tscarma.specfun import (
    EvalResult,
    expint,
    expint_with_error,
    gamma,
    gamma_upper,
    gamma_upper_with_error,
    hyp2f1,
    hyp2f1_with_error,
    pochhammer,
    pochhammer_with_error,
    zeta,
    zeta_with_error,
    _digamma,
    _gamma_reflect,
)

SQRT_PI = 1.7724538509055160273


class TestGamma:
    def test_half_integer_values(self):
        assert gamma(0.5) == pytest.approx(SQRT_PI, rel=1e-12)
        assert gamma(1.5) == pytest.approx(SQRT_PI / 2.0, rel=1e-12)

    def test_factorial(self):
        assert gamma(5.0) == pytest.approx(24.0, rel=1e-12)

    def test_domain(self):
        for bad in (0.0, -1.5, -3.0, math.inf, math.nan):
            with pytest.raises(DomainError):
                gamma(bad)


class TestGammaUpper:
    def test_exponential_cases(self):
        # Gamma(1, x) = e^-x, Gamma(2, x) = (1 + x) e^-x
        assert gamma_upper(1.0, 2.0) == pytest.approx(math.exp(-2.0), rel=1e-12)
        assert gamma_upper(2.0, 1.0) == pytest.approx(2.0 * math.exp(-1.0), rel=1e-12)

    def test_half_at_one(self):
        # frozen from adaptive quadrature of the defining integral
        assert gamma_upper(0.5, 1.0) == pytest.approx(0.27880558528066198, rel=1e-10)

    def test_at_zero_is_complete(self):
        assert gamma_upper(3.7, 0.0) == gamma(3.7)

    def test_against_defining_integral(self, rng):
        for _ in range(40):
            s = rng.uniform(0.1, 5.0)
            x = rng.uniform(0.01, 10.0)
            ref, _ = quad(lambda t: t ** (s - 1.0) * math.exp(-t), x, math.inf, epsabs=1e-14, epsrel=1e-12)
            assert gamma_upper(s, x) == pytest.approx(ref, rel=1e-10)

    def test_recurrence(self, rng):
        # Gamma(s+1, x) = s Gamma(s, x) + x^s e^-x
        for _ in range(100):
            s = rng.uniform(0.1, 5.0)
            x = rng.uniform(1e-6, 10.0)
            lhs = gamma_upper(s + 1.0, x)
            rhs = s * gamma_upper(s, x) + x**s * math.exp(-x)
            assert lhs == pytest.approx(rhs, rel=1e-9)

    def test_domain(self):
        with pytest.raises(DomainError):
            gamma_upper(-1.0, 1.0)
        with pytest.raises(DomainError):
            gamma_upper(1.0, -0.5)

    def test_error_estimate_fields(self):
        res = gamma_upper_with_error(1.5, 2.5)
        assert isinstance(res, EvalResult)
        assert math.isfinite(res.value)
        assert math.isfinite(res.est_abs_error) and res.est_abs_error >= 0


class TestExpint:
    def test_order_one(self):
        # frozen from adaptive quadrature of int_1^inf e^-t / t dt
        assert expint(1.0, 1.0) == pytest.approx(0.21938393439552027, rel=1e-10)

    def test_identity_with_gamma_upper(self):
        # E_m(x) = x^(m-1) Gamma(1-m, x)
        assert expint(0.5, 1.0) == pytest.approx(gamma_upper(0.5, 1.0), rel=1e-10)

    def test_at_zero(self):
        assert expint(2.0, 0.0) == 1.0
        assert expint(3.5, 0.0) == pytest.approx(0.4, rel=1e-14)
        with pytest.raises(DomainError):
            expint(1.0, 0.0)

    def test_identity_random_orders(self, rng):
        for _ in range(60):
            m = rng.uniform(0.05, 0.95)
            x = rng.uniform(0.05, 8.0)
            assert expint(m, x) == pytest.approx(x ** (m - 1.0) * gamma_upper(1.0 - m, x), rel=1e-8)

    def test_against_defining_integral(self, rng):
        for _ in range(40):
            m = rng.uniform(-2.5, 4.5)
            x = rng.uniform(0.05, 6.0)
            ref, _ = quad(lambda t: math.exp(-x * t) * t ** (-m), 1.0, math.inf, epsabs=1e-14, epsrel=1e-12)
            assert expint(m, x) == pytest.approx(ref, rel=1e-10)

    def test_zero_and_negative_integer_orders(self):
        x = 0.7
        assert expint(0.0, x) == pytest.approx(math.exp(-x) / x, rel=1e-14)
        # E_-1(x) = e^-x (1 + x) / x^2
        assert expint(-1.0, x) == pytest.approx(math.exp(-x) * (1.0 + x) / x**2, rel=1e-12)

    def test_near_integer_order(self):
        m = 2.0 + 1e-9
        ref, _ = quad(lambda t: math.exp(-0.5 * t) * t ** (-m), 1.0, math.inf, epsabs=1e-15, epsrel=1e-13)
        assert expint(m, 0.5) == pytest.approx(ref, rel=1e-9)

    def test_tiny_argument(self):
        # orders/arguments typical of high truncation levels
        val = expint(-0.5, 4e-8)
        ref, _ = quad(lambda s: math.exp(-s) * (1.0 + s / 4e-8) ** 0.5, 0.0, math.inf, epsabs=1e-14, epsrel=1e-12)
        assert val == pytest.approx(math.exp(-4e-8) / 4e-8 * ref, rel=1e-9)

    def test_domain(self):
        with pytest.raises(DomainError):
            expint(1.0, -1.0)
        with pytest.raises(DomainError):
            expint(0.5, 0.0)

    def test_with_error(self):
        res = expint_with_error(1.5, 0.3)
        assert res.est_abs_error >= 0


class TestHyp2f1:
    def test_at_zero(self):
        assert hyp2f1(0.3, 0.7, 1.1, 0.0) == 1.0

    def test_log_identity(self):
        # 2F1(1,1;2;x) = -log(1-x)/x
        assert hyp2f1(1.0, 1.0, 2.0, -1.0) == pytest.approx(math.log(2.0), rel=1e-12)

    def test_frozen_reference(self):
        # frozen from a compensated 25-digit series evaluation
        assert hyp2f1(0.5, 0.5, 1.5, -2.0) == pytest.approx(0.81049698947675375, rel=1e-9)

    def test_arcsinh_identity(self, rng):
        # 2F1(0.5, 0.5; 1.5; -x^2) = asinh(x)/x
        for _ in range(25):
            x = rng.uniform(0.05, 4.0)
            assert hyp2f1(0.5, 0.5, 1.5, -(x**2)) == pytest.approx(math.asinh(x) / x, rel=1e-9)

    def test_binomial_identity(self, rng):
        # 2F1(a, b; b; x) = (1-x)^-a
        for _ in range(25):
            a = rng.uniform(0.2, 3.0)
            b = rng.uniform(0.2, 3.0)
            x = -rng.uniform(0.0, 20.0)
            assert hyp2f1(a, b, b, x) == pytest.approx((1.0 - x) ** (-a), rel=1e-9)

    def test_argument_symmetry_bitwise(self, rng):
        for _ in range(50):
            a, b = rng.uniform(0.1, 4.0, size=2)
            c = rng.uniform(0.5, 5.0)
            x = -rng.uniform(0.0, 30.0)
            assert hyp2f1(a, b, c, x) == hyp2f1(b, a, c, x)

    def test_domain(self):
        with pytest.raises(DomainError):
            hyp2f1(1.0, 1.0, 0.0, -1.0)
        with pytest.raises(DomainError):
            hyp2f1(1.0, 1.0, -2.0, -0.5)
        with pytest.raises(DomainError):
            hyp2f1(1.0, 1.0, 2.0, 0.5)

    def test_convergence_diagnostics(self):
        import tscarma.specfun as sf

        old = sf.MAX_TERMS
        sf.MAX_TERMS = 3
        try:
            with pytest.raises(ConvergenceError) as exc_info:
                hyp2f1_with_error(2.0, 3.0, 1.5, -40.0)
            assert exc_info.value.terms_used == 3
            assert exc_info.value.last_term is not None
        finally:
            sf.MAX_TERMS = old


class TestZeta:
    def test_basel(self):
        assert zeta(2.0) == pytest.approx(math.pi**2 / 6.0, rel=1e-12)

    def test_apery(self):
        assert zeta(3.0) == pytest.approx(1.2020569031595943, rel=1e-10)

    def test_continued_strip(self):
        assert zeta(0.5) == pytest.approx(-1.4603545088095868, rel=1e-10)

    def test_dirichlet_tail_oracle(self):
        # independent oracle: 2e6 explicit terms, integral tail, half-term and
        # one Bernoulli correction
        def oracle(s):
            k = np.arange(1, 2_000_000, dtype=float)
            big = 2_000_000.0
            return float(
                np.sum(k**-s) + big ** (1.0 - s) / (s - 1.0) + 0.5 * big**-s + s / 12.0 * big ** (-s - 1.0)
            )

        for s in (1.5, 2.0, 3.0):
            assert zeta(s) == pytest.approx(oracle(s), rel=1e-10)

    def test_domain(self):
        for bad in (1.0, 0.0, -2.0):
            with pytest.raises(DomainError):
                zeta(bad)

    def test_error_estimate(self):
        res = zeta_with_error(0.75)
        assert res.est_abs_error < 1e-10


class TestPochhammer:
    def test_examples(self):
        assert pochhammer(3.0, 4) == 360.0
        assert pochhammer(0.5, 2) == 0.75
        assert pochhammer(-7.3, 0) == 1.0

    @given(st.floats(-10, 10, allow_nan=False), st.integers(0, 30))
    @settings(max_examples=200, deadline=None)
    def test_recurrence(self, q, j):
        assert pochhammer(q, j + 1) == pytest.approx(pochhammer(q, j) * (q + j), rel=1e-12, abs=1e-280)

    def test_overflow_reports_infinity(self):
        res = pochhammer_with_error(300.0, 200)
        assert math.isinf(res.value)
        assert math.isinf(res.est_abs_error)

    def test_domain(self):
        with pytest.raises(DomainError):
            pochhammer(1.0, -1)


class TestPurity:
    def test_bitwise_repeatability(self):
        calls = [
            lambda: gamma_upper(0.7, 3.3),
            lambda: expint(1.3, 0.4),
            lambda: hyp2f1(0.4, 1.2, 2.1, -5.0),
            lambda: zeta(0.9),
        ]
        for call in calls:
            assert call() == call()


class TestInternalHelpers:
    def test_digamma_against_recurrence(self, rng):
        # psi(x+1) = psi(x) + 1/x
        for _ in range(50):
            x = rng.uniform(0.1, 20.0)
            assert _digamma(x + 1.0) == pytest.approx(_digamma(x) + 1.0 / x, rel=1e-11)

    def test_digamma_at_one(self):
        assert _digamma(1.0) == pytest.approx(-0.5772156649015329, rel=1e-12)

    def test_gamma_reflection(self):
        # Gamma(-0.5) = -2 sqrt(pi)
        assert _gamma_reflect(-0.5) == pytest.approx(-2.0 * SQRT_PI, rel=1e-12)
        assert _gamma_reflect(2.5) == gamma(2.5)
        with pytest.raises(DomainError):
            _gamma_reflect(-3.0)
