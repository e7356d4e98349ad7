"""Two-sample Fasano-Franceschini test and fitted-model goodness of fit."""

from .ff import GofConfig, GofResult, ff_statistic, ff_statistic_bruteforce, ff_test
from .pipeline import compare_fitted_to_truth, fitted_gof

__all__ = [
    'GofConfig',
    'GofResult',
    'compare_fitted_to_truth',
    'ff_statistic',
    'ff_statistic_bruteforce',
    'ff_test',
    'fitted_gof',
]
