import math

import mpmath
import numpy as np
import pytest
from scipy import integrate
from scipy import special as sp

from kinwealth.special import (EULER_MASCHERONI, beta_pdf, digamma, log_beta,
                               log_gamma, reg_lower_gamma, reg_upper_gamma,
                               trigamma_partial_sums)


class TestLogGamma:
    def test_gamma_one_is_zero(self):
        assert log_gamma(1.0) == 0.0

    def test_half_integer(self):
        # Gamma(1/2) = sqrt(pi)
        assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), abs=1e-15)

    def test_factorial(self):
        assert log_gamma(5.0) == pytest.approx(math.log(24.0), abs=1e-14)

    def test_against_high_precision_reference(self):
        mpmath.mp.dps = 40
        for x in np.geomspace(1e-3, 1e3, 60):
            ref = float(mpmath.loggamma(mpmath.mpf(float(x))))
            assert abs(log_gamma(float(x)) - ref) < 1e-12

    @pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
    def test_domain_error(self, x):
        with pytest.raises(ValueError):
            log_gamma(x)


class TestDigamma:
    def test_at_one(self):
        assert digamma(1.0) == pytest.approx(-EULER_MASCHERONI, abs=1e-12)

    def test_at_half(self):
        assert digamma(0.5) == pytest.approx(
            -EULER_MASCHERONI - 2.0 * math.log(2.0), abs=1e-12)

    def test_recurrence_value(self):
        # psi(3/2) = psi(1/2) + 2
        assert digamma(1.5) == pytest.approx(
            2.0 - EULER_MASCHERONI - 2.0 * math.log(2.0), abs=1e-12)

    def test_against_scipy_grid(self):
        xs = np.geomspace(1e-3, 1e3, 500)
        err = max(abs(digamma(float(x)) - sp.digamma(x)) for x in xs)
        assert err < 1e-10

    @pytest.mark.parametrize("x", [0.75, 1.0, 2.0, 10.0])
    def test_duplication_identity(self, x):
        lhs = 2.0 * digamma(2.0 * x)
        rhs = digamma(x) + digamma(x + 0.5) + 2.0 * math.log(2.0)
        assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            digamma(0.0)

    @pytest.mark.parametrize("x", [1.0, 2.5])
    def test_series_brackets_derivative(self, x):
        # partial sums of sum 1/(x+k)^2 bracket the slope of digamma
        partial, tail = trigamma_partial_sums(x, 200)
        h = 1e-5
        fd = (digamma(x + h) - digamma(x - h)) / (2.0 * h)
        assert partial - 1e-6 <= fd <= partial + tail + 1e-6


class TestBetaPdf:
    def test_uniform_case(self):
        assert beta_pdf(1.0, 1.0, 0.3) == 1.0

    def test_symmetric_two(self):
        # 6 x (1-x) at 1/2
        assert beta_pdf(2.0, 2.0, 0.5) == pytest.approx(1.5, abs=1e-14)

    def test_outside_support(self):
        assert beta_pdf(2.0, 2.0, 1.2) == 0.0
        assert beta_pdf(2.0, 2.0, -0.1) == 0.0

    def test_finite_edge_limits(self):
        assert beta_pdf(1.0, 2.0, 0.0) == 2.0
        assert beta_pdf(3.0, 1.0, 1.0) == 3.0
        assert beta_pdf(2.0, 2.0, 0.0) == 0.0

    def test_pole_errors(self):
        with pytest.raises(ValueError):
            beta_pdf(0.5, 1.0, 0.0)
        with pytest.raises(ValueError):
            beta_pdf(1.0, 0.5, 1.0)

    def test_invalid_shapes(self):
        with pytest.raises(ValueError):
            beta_pdf(0.0, 1.0, 0.5)

    @pytest.mark.parametrize("a", [0.5, 1.0, 2.0, 5.0])
    @pytest.mark.parametrize("b", [0.5, 1.0, 2.0, 5.0])
    def test_integrates_to_one(self, a, b):
        val, _ = integrate.quad(lambda x: beta_pdf(a, b, x), 0.0, 1.0,
                                epsabs=1e-12, epsrel=1e-11, limit=200)
        assert val == pytest.approx(1.0, abs=1e-8)


class TestIncompleteGamma:
    def test_against_scipy(self):
        for a in [0.3, 0.5, 1.0, 1.5, 3.0, 10.0, 100.0]:
            for x in np.geomspace(1e-6, 1e3, 80):
                assert abs(reg_lower_gamma(a, float(x)) - sp.gammainc(a, x)) < 1e-10
                assert abs(reg_upper_gamma(a, float(x)) - sp.gammaincc(a, x)) < 1e-10

    def test_limits(self):
        assert reg_lower_gamma(2.0, 0.0) == 0.0
        assert reg_upper_gamma(2.0, 0.0) == 1.0

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            reg_lower_gamma(-1.0, 1.0)
        with pytest.raises(ValueError):
            reg_upper_gamma(1.0, -1.0)


def test_log_beta_consistency():
    assert log_beta(2.0, 3.0) == pytest.approx(math.log(1.0 / 12.0), abs=1e-14)
