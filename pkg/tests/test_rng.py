import math

import numpy as np
import pytest
from scipy import stats

from core.errors import InvalidDistributionParameter
from sample.rng import (
    UniformStream, derive_seed, gamma_variate, poisson_log_variate, poisson_variate, uniform_stream,
)


def poisson_draws(mean, n, seed=5):
    stream = UniformStream(seed)
    return np.array([poisson_variate(mean, stream) for _ in range(n)])


def gamma_draws(shape, rate, n, seed=5):
    stream = UniformStream(seed)
    return np.array([gamma_variate(shape, rate, stream) for _ in range(n)])


class TestStreams:

    def test_same_seed_same_stream(self):
        a, b = uniform_stream(42), uniform_stream(42)
        np.testing.assert_array_equal(a.uniforms(5000), b.uniforms(5000))

    def test_uniforms_are_open_interval(self):
        u = UniformStream(1).uniforms(10_000)
        assert np.all((u > 0.0) & (u < 1.0))

    def test_derived_seeds(self):
        assert derive_seed(7, 3) == derive_seed(7, 3)
        children = {derive_seed(7, i) for i in range(100)}
        assert len(children) == 100
        assert derive_seed(7, 0) != derive_seed(8, 0)
        assert all(0 <= s < 2**64 for s in children)

    def test_permutation_is_reproducible(self):
        np.testing.assert_array_equal(UniformStream(3).permutation(50), UniformStream(3).permutation(50))


class TestPoisson:

    @pytest.mark.parametrize('mean', [0.3, 4.0])
    def test_inversion_moments(self, mean):
        draws = poisson_draws(mean, 100_000)
        assert draws.mean() == pytest.approx(mean, abs=4 * math.sqrt(mean / len(draws)))
        assert draws.var() / draws.mean() == pytest.approx(1.0, abs=0.03)

    @pytest.mark.parametrize('mean', [10.0, 37.5, 1000.0])
    def test_rejection_moments(self, mean):
        draws = poisson_draws(mean, 100_000)
        assert draws.mean() == pytest.approx(mean, abs=4 * math.sqrt(mean / len(draws)))
        assert draws.var() / draws.mean() == pytest.approx(1.0, abs=0.03)

    def test_rejection_pmf(self):
        draws = poisson_draws(25.0, 50_000)
        ks = np.arange(10, 41)
        observed = np.array([(draws == k).sum() for k in ks])
        expected = stats.poisson.pmf(ks, 25.0) * len(draws)
        np.testing.assert_allclose(observed, expected, atol=5 * np.sqrt(expected).max())

    @pytest.mark.parametrize('mean', [0.0, -1.0, math.inf, math.nan])
    def test_rejects_bad_mean(self, mean):
        with pytest.raises(InvalidDistributionParameter):
            poisson_variate(mean, UniformStream(0))

    @pytest.mark.parametrize('log_mean', [-710.0, -1000.0, -math.inf])
    def test_log_mean_below_smallest_double_gives_zero(self, log_mean):
        stream = UniformStream(0)
        assert poisson_log_variate(log_mean, stream) == 0

    def test_log_mean_matches_mean(self):
        a, b = UniformStream(5), UniformStream(5)
        for _ in range(200):
            assert poisson_log_variate(1.2, a) == poisson_variate(math.exp(1.2), b)

    @pytest.mark.parametrize('log_mean', [math.nan, 800.0])
    def test_log_mean_rejected(self, log_mean):
        with pytest.raises(InvalidDistributionParameter):
            poisson_log_variate(log_mean, UniformStream(0))

    @pytest.mark.slow
    def test_equidispersion_large_sample(self):
        draws = poisson_draws(4.0, 1_000_000)
        assert draws.var() / draws.mean() == pytest.approx(1.0, abs=0.01)


class TestGamma:

    def test_exponential_mean(self):
        draws = gamma_draws(1.0, 1.0, 200_000)
        assert draws.mean() == pytest.approx(1.0, abs=0.01)

    @pytest.mark.parametrize('shape, rate', [(0.5, 2.0), (2.5, 0.7), (0.05, 1.0), (40.0, 3.0)])
    def test_distribution(self, shape, rate):
        draws = gamma_draws(shape, rate, 50_000)
        result = stats.kstest(draws, stats.gamma(a=shape, scale=1.0 / rate).cdf)
        assert result.statistic < 0.01

    def test_tiny_shape_stays_positive(self):
        draws = gamma_draws(0.01, 1.0, 20_000)
        assert np.all(draws >= 1e-300)

    @pytest.mark.parametrize('shape, rate', [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (1.0, math.nan)])
    def test_rejects_bad_parameters(self, shape, rate):
        with pytest.raises(InvalidDistributionParameter):
            gamma_variate(shape, rate, UniformStream(0))

    @pytest.mark.slow
    def test_large_sample_accuracy(self):
        draws = gamma_draws(1.0, 1.0, 1_000_000)
        assert draws.mean() == pytest.approx(1.0, abs=0.004)
        half = gamma_draws(0.5, 2.0, 1_000_000, seed=8)
        assert stats.kstest(half, stats.gamma(a=0.5, scale=0.5).cdf).statistic < 0.002
