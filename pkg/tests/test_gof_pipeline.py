import pytest

from core.dataset import Dataset
from core.errors import InvalidObservation
from core.params import validate_params
from fit.barrier import MleConfig, fit_mle
from gof.ff import GofConfig
from gof.pipeline import compare_fitted_to_truth, fitted_gof
from sample.exact import exact_sample
from sample.rng import derive_seed

from conftest import HOSPITAL, STUDY_CASES

FAST_FIT = MleConfig(compute_std_errors=False)


def test_fitted_gof_on_model_data(case1):
    data = exact_sample(case1, 400, seed=55).to_dataset()
    mle, result = fitted_gof(data, GofConfig(n_perm=199, seed=8), FAST_FIT)
    assert mle.converged
    assert result.n1 == 400 and result.n2 == 400
    assert 0.005 <= result.p_value <= 1.0
    assert result.seed == derive_seed(8, 1)


def test_fitted_gof_is_deterministic(case1):
    data = exact_sample(case1, 200, seed=56).to_dataset()
    cfg = GofConfig(n_perm=99, seed=9, n_sim=150)
    first = fitted_gof(data, cfg, FAST_FIT)[1]
    assert first.n2 == 150
    assert fitted_gof(data, cfg, FAST_FIT)[1] == first


def test_nested_independence_truth():
    truth = validate_params((1.0, 1.0, 0.0, 1.0, 0.0))
    data = exact_sample(truth, 500, seed=13).to_dataset()
    _, result = fitted_gof(data, GofConfig(n_perm=199, seed=2), FAST_FIT)
    assert result.p_value > 0.01


def test_compare_fitted_to_truth_uses_separate_streams(case2):
    result = compare_fitted_to_truth(case2, case2, 300, GofConfig(n_perm=99, seed=21))
    assert result.raw_stat > 0
    assert result.seed == derive_seed(21, 2)


def test_negative_y_is_refused_before_fitting():
    with pytest.raises(InvalidObservation):
        Dataset.from_arrays([1, 2, 3], [1.0, -0.5, 2.0])


@pytest.mark.slow
@pytest.mark.parametrize('truth', STUDY_CASES)
def test_fitted_against_truth_samples(truth):
    params = validate_params(truth)
    passes = 0
    for r in range(20):
        seed = derive_seed(31, r)
        data = exact_sample(params, 1000, seed=seed).to_dataset()
        estimates = fit_mle(data, FAST_FIT).estimates
        result = compare_fitted_to_truth(params, estimates, 1000, GofConfig(n_perm=199, seed=seed))
        passes += result.p_value > 0.05
    assert passes >= 18


@pytest.mark.slow
@pytest.mark.parametrize('truth', [STUDY_CASES[0], HOSPITAL])
def test_self_consistency(truth):
    params = validate_params(truth)
    n = 1000 if truth == STUDY_CASES[0] else 500
    passes = 0
    for r in range(20):
        data = exact_sample(params, n, seed=derive_seed(77, r)).to_dataset()
        _, result = fitted_gof(data, GofConfig(n_perm=199, seed=r), FAST_FIT)
        passes += result.p_value > 0.05
    assert passes >= 18
