import math

import numpy as np
import pytest
from scipy import integrate, stats
from scipy.special import logsumexp

from core.density import (
    cdf_x, cdf_y, conditional_gamma, conditional_poisson_mean, log_pdf, log_pdf_y, log_pmf_x,
    marginal_table, moments, quantile_x, y_upper_limit,
)
from core.errors import InvalidConfig, InvalidObservation, InvalidProbability
from core.normalizer import log_normalizer
from core.params import validate_params


def integrate_y(density, params, norm, x=0):
    """Quadrature over (0, y_upper_limit) split at the conditional mean for x."""
    upper = y_upper_limit(params, norm)
    value, _ = integrate.quad(density, 0.0, upper, points=[conditional_gamma(params, x).mean],
                              epsabs=1e-14, epsrel=1e-11, limit=400)
    return value


def joint_mass(params, norm):
    total = 0.0
    for x in range(len(marginal_table(params, norm).pmf)):
        total += integrate_y(lambda y: math.exp(log_pdf(params, x, y, norm)), params, norm, x)
    return total


class TestIndependence:

    def test_point_density(self, independent):
        assert log_pdf(independent, 0, 1.0) == pytest.approx(-math.e - 1.0, abs=1e-12)

    def test_factorizes(self, independent):
        x, y = 3, 2.0
        expected = stats.poisson.logpmf(x, math.e) + stats.gamma.logpdf(y, a=1.0)
        assert log_pdf(independent, x, y) == pytest.approx(expected, abs=1e-12)

    def test_marginals(self, independent):
        assert log_pmf_x(independent, 3) == pytest.approx(stats.poisson.logpmf(3, math.e), abs=1e-12)
        assert log_pdf_y(independent, 2.0) == pytest.approx(-2.0, abs=1e-12)

    def test_quantiles_are_poisson(self, independent):
        u = np.array([0.05, 0.3, 0.5, 0.9, 0.99])
        np.testing.assert_array_equal(quantile_x(independent, u), stats.poisson.ppf(u, math.e).astype(int))

    def test_moments(self, independent):
        m = moments(independent)
        assert m.mean_x == pytest.approx(math.e, rel=1e-10)
        assert m.var_x == pytest.approx(math.e, rel=1e-8)
        assert m.mean_y == pytest.approx(1.0, rel=1e-10)
        assert m.var_y == pytest.approx(1.0, rel=1e-8)
        assert m.cov_xy == pytest.approx(0.0, abs=1e-10)


class TestNormalization:

    def test_x_marginal_sums_to_one(self, case1):
        table = marginal_table(case1)
        assert table.pmf.sum() == pytest.approx(1.0, abs=1e-9)
        assert table.cdf[-1] == pytest.approx(1.0, abs=1e-9)

    def test_joint_integrates_to_one(self, study_params):
        norm = log_normalizer(study_params)
        assert joint_mass(study_params, norm) == pytest.approx(1.0, abs=1e-6)

    def test_y_marginal_integrates_to_one(self, case2):
        norm = log_normalizer(case2)
        value = integrate_y(lambda y: math.exp(log_pdf_y(case2, y, norm)), case2, norm)
        assert value == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize('x', [0, 2, 5])
    def test_x_marginal_is_integral_over_y(self, case2, x):
        norm = log_normalizer(case2)
        value = integrate_y(lambda y: math.exp(log_pdf(case2, x, y, norm)), case2, norm, x)
        assert log_pmf_x(case2, x, norm) == pytest.approx(math.log(value), abs=1e-8)

    @pytest.mark.parametrize('y', [0.5, 1.0, 5.0])
    def test_y_marginal_is_sum_over_x(self, case1, y):
        norm = log_normalizer(case1)
        xs = np.arange(400)
        total = logsumexp(log_pdf(case1, xs, np.full(len(xs), y), norm))
        assert log_pdf_y(case1, y, norm) == pytest.approx(total, abs=1e-8)


class TestConditionals:

    @pytest.mark.parametrize('x, y', [(0, 0.5), (1, 0.5), (2, 2.0), (4, 1.0), (3, 3.0)])
    def test_decomposition(self, study_params, x, y):
        norm = log_normalizer(study_params)
        joint = log_pdf(study_params, x, y, norm)

        gamma = conditional_gamma(study_params, x)
        expected_y = stats.gamma.logpdf(y, a=gamma.shape, scale=1.0 / gamma.rate)
        assert joint - log_pmf_x(study_params, x, norm) == pytest.approx(expected_y, abs=1e-10)

        lam = conditional_poisson_mean(study_params, y)
        expected_x = stats.poisson.logpmf(x, lam)
        assert joint - log_pdf_y(study_params, y, norm) == pytest.approx(expected_x, abs=1e-10)

    def test_poisson_mean(self):
        assert conditional_poisson_mean(validate_params((1, 2, 0, 3, 0)), 7.0) == pytest.approx(math.e)
        assert conditional_poisson_mean(validate_params((1, 1, 1, 1, 1)), 1.0) == pytest.approx(1.0)
        expected = math.exp(1 - 0.3 + 0.1 * math.log(3))
        assert conditional_poisson_mean(validate_params((1, 1, 0.1, 1, 0.1)), 3.0) == pytest.approx(expected)

    def test_gamma_parameters(self, case1):
        g0 = conditional_gamma(case1, 0)
        assert (g0.shape, g0.rate) == (case1.m02, case1.m01)
        g5 = conditional_gamma(case1, 5)
        assert g5.shape == pytest.approx(1.5)
        assert g5.rate == pytest.approx(1.5)


class TestDistributionFunctions:

    def test_cdf_x_is_monotone(self, case2):
        values = cdf_x(case2, np.arange(101))
        assert np.all(np.diff(values) >= 0.0)
        assert values[-1] == pytest.approx(1.0, abs=1e-10)

    def test_cdf_x_matches_pmf_sum(self, case1):
        norm = log_normalizer(case1)
        expected = np.exp(log_pmf_x(case1, np.arange(6), norm)).sum()
        assert cdf_x(case1, 5, norm) == pytest.approx(expected, rel=1e-12)

    def test_cdf_x_far_past_the_summed_range(self, case1):
        assert cdf_x(case1, 2**31 - 1) == 1.0
        small = cdf_x(case1, np.array([0, 5]))
        values = cdf_x(case1, np.array([0, 5, 10**9]))
        np.testing.assert_array_equal(values[:2], small)
        assert values[2] == 1.0

    def test_quantile_left_edge(self, case2):
        assert quantile_x(case2, 1e-300) == 0

    @pytest.mark.parametrize('u', [0.0, 1.0, -0.5, math.nan])
    def test_quantile_rejects_outside_unit_interval(self, case2, u):
        with pytest.raises(InvalidProbability):
            quantile_x(case2, u)

    def test_cdf_y_methods_agree(self, case2):
        t = np.array([0.2, 1.0, 3.0, 10.0])
        np.testing.assert_allclose(cdf_y(case2, t, method='mixture'), cdf_y(case2, t, method='quadrature'),
                                   atol=1e-8)

    def test_cdf_y_independence(self, independent):
        t = np.array([0.5, 2.0, 7.0])
        np.testing.assert_allclose(cdf_y(independent, t), 1.0 - np.exp(-t), atol=1e-10)

    def test_cdf_y_unknown_method(self, case2):
        with pytest.raises(InvalidConfig):
            cdf_y(case2, 1.0, method='trapezoid')

    def test_y_upper_limit_covers_the_mass(self, case1):
        assert cdf_y(case1, y_upper_limit(case1)) == pytest.approx(1.0, abs=1e-9)


class TestDomain:

    @pytest.mark.parametrize('x, y', [(1.5, 1.0), (-1, 1.0), (1, 0.0), (1, -3.0)])
    def test_rejects_invalid_points(self, case1, x, y):
        with pytest.raises(InvalidObservation):
            log_pdf(case1, x, y)

    def test_continuous_x_extends_factorial(self, case1):
        value = log_pdf(case1, 2.5, 1.0, continuous_x=True)
        below = log_pdf(case1, 2, 1.0)
        above = log_pdf(case1, 3, 1.0)
        assert min(below, above) - 1.0 < value < max(below, above) + 1.0
