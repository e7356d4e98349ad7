"""Random generation: Gibbs chain, exact composition sampler and seeded variates."""

from .exact import draw, exact_sample
from .gibbs import GibbsConfig, SampleBatch, gibbs_sample
from .rng import UniformStream, derive_seed, gamma_variate, poisson_log_variate, poisson_variate, uniform_stream

__all__ = [
    'GibbsConfig',
    'SampleBatch',
    'UniformStream',
    'derive_seed',
    'draw',
    'exact_sample',
    'gamma_variate',
    'gibbs_sample',
    'poisson_log_variate',
    'poisson_variate',
    'uniform_stream',
]
