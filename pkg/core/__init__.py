"""Core BPGC model: parameters, normalizing constant, densities and diagnostics."""

from .dataset import Dataset
from .density import (
    MarginalTable, Moments, cdf_x, cdf_y, conditional_gamma, conditional_poisson_mean,
    log_pdf, log_pdf_y, log_pmf_x, marginal_table, moments, quantile_x, y_upper_limit,
)
from .diagnostics import (
    DependenceReport, OrderingReport, RegressionCurves, dependence_report,
    find_conditional_mode, local_dependence, ordering_diagnostics, regression_curves,
    score_x, score_y,
)
from .errors import BPGCError
from .normalizer import LogNormalizer, log_normalizer
from .params import GammaConditional, Observation, Params, is_valid, make_observation, validate_params

__all__ = [
    'BPGCError',
    'Dataset',
    'DependenceReport',
    'GammaConditional',
    'LogNormalizer',
    'MarginalTable',
    'Moments',
    'Observation',
    'OrderingReport',
    'Params',
    'RegressionCurves',
    'cdf_x',
    'cdf_y',
    'conditional_gamma',
    'conditional_poisson_mean',
    'dependence_report',
    'find_conditional_mode',
    'is_valid',
    'local_dependence',
    'log_normalizer',
    'log_pdf',
    'log_pdf_y',
    'log_pmf_x',
    'make_observation',
    'marginal_table',
    'moments',
    'ordering_diagnostics',
    'quantile_x',
    'regression_curves',
    'score_x',
    'score_y',
    'validate_params',
    'y_upper_limit',
]
