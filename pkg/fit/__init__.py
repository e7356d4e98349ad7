"""Maximum-likelihood fitting under the parameter constraints."""

from .barrier import MleConfig, MleResult, TraceEntry, fit_mle, moment_start
from .information import observed_information, std_errors
from .likelihood import fisher_information, gradient, log_likelihood, log_normalizer_gradient

__all__ = [
    'MleConfig',
    'MleResult',
    'TraceEntry',
    'fisher_information',
    'fit_mle',
    'gradient',
    'log_likelihood',
    'log_normalizer_gradient',
    'moment_start',
    'observed_information',
    'std_errors',
]
