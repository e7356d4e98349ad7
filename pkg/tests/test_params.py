import math

import numpy as np
import pytest

from core.errors import (
    BPGCError, DivergentSeries, InvalidObservation, InvalidParameter, NegativeInteraction,
    NonFiniteParameter, NonPositiveParameter,
)
from core.params import GammaConditional, Params, is_valid, make_observation, validate_params


class TestValidateParams:

    def test_study_case_is_valid(self):
        params = validate_params((1, 1, 0.1, 1, 0.1))
        assert isinstance(params, Params)
        assert params.as_dict() == {'m10': 1.0, 'm01': 1.0, 'm11': 0.1, 'm02': 1.0, 'm12': 0.1}

    def test_negative_rate_names_m01(self):
        with pytest.raises(NonPositiveParameter) as exc:
            validate_params((1, -1, 0, 1, 0))
        assert exc.value.name == 'm01'
        assert 'm01' in str(exc.value)
        assert exc.value.exit_code == 2

    @pytest.mark.parametrize('raw, name', [
        ((0, 1, 0, 1, 0), 'm10'),
        ((1, 1, 0, 0, 0), 'm02'),
    ])
    def test_strict_parameters_must_be_positive(self, raw, name):
        with pytest.raises(NonPositiveParameter) as exc:
            validate_params(raw)
        assert exc.value.name == name

    @pytest.mark.parametrize('raw, name', [
        ((1, 1, -0.1, 1, 0), 'm11'),
        ((1, 1, 0.5, 1, -0.1), 'm12'),
    ])
    def test_interactions_must_be_non_negative(self, raw, name):
        with pytest.raises(NegativeInteraction) as exc:
            validate_params(raw)
        assert exc.value.name == name

    def test_non_finite(self):
        with pytest.raises(NonFiniteParameter):
            validate_params((1, math.nan, 0, 1, 0))
        with pytest.raises(NonFiniteParameter):
            validate_params((1, 1, math.inf, 1, 0))

    def test_wrong_length(self):
        with pytest.raises(InvalidParameter):
            validate_params((1, 1, 1, 1))

    def test_growing_shape_without_rate_interaction_diverges(self):
        with pytest.raises(DivergentSeries):
            validate_params((1, 1, 0, 1, 2))

    def test_compound_poisson_needs_m10_below_log_m01(self):
        with pytest.raises(DivergentSeries):
            validate_params((1, 1, 0, 1, 1))
        params = validate_params((0.5, 2, 0, 1, 1))
        assert params.is_compound_poisson

    def test_any_positive_m11_converges(self):
        assert is_valid((3, 0.1, 1e-6, 1, 50))

    def test_errors_share_base_class(self):
        assert issubclass(DivergentSeries, BPGCError)
        assert issubclass(BPGCError, ValueError)

    def test_str_lists_all_parameters(self):
        assert str(validate_params((1, 2, 0.5, 3, 0.25))) == '(1, 2, 0.5, 3, 0.25)'


class TestObservations:

    def test_make_observation(self):
        obs = make_observation(3, 2.5)
        assert obs.x == 3 and obs.y == 2.5

    @pytest.mark.parametrize('x, y', [(-1, 1.0), (1.5, 1.0), (1, 0.0), (1, -2.0), (1, math.inf)])
    def test_rejects_out_of_domain(self, x, y):
        with pytest.raises(InvalidObservation):
            make_observation(x, y)


class TestGammaConditional:

    def test_moments_and_mode(self):
        g = GammaConditional(shape=3.0, rate=2.0)
        assert g.mean == pytest.approx(1.5)
        assert g.variance == pytest.approx(0.75)
        assert g.mode == pytest.approx(1.0)
        assert GammaConditional(shape=1.0, rate=2.0).mode is None

    def test_cdf_matches_scipy(self):
        from scipy import stats
        g = GammaConditional(shape=2.5, rate=1.5)
        y = np.array([0.1, 1.0, 4.0])
        np.testing.assert_allclose(g.cdf(y), stats.gamma.cdf(y, a=2.5, scale=1 / 1.5), rtol=1e-12)
        np.testing.assert_allclose(g.logpdf(y), stats.gamma.logpdf(y, a=2.5, scale=1 / 1.5), rtol=1e-12)
