"""Exact i.i.d. sampler: x from the marginal table, then y from its Gamma conditional."""

import logging
from typing import Optional

import numpy as np

from core.density import marginal_table
from core.errors import InvalidConfig
from core.normalizer import LogNormalizer

from .gibbs import DEFAULT_SEED, GibbsConfig, SampleBatch, gibbs_sample
from .rng import UniformStream, gamma_variate

logger = logging.getLogger(__name__)


def exact_sample(params, n: int, seed: int = DEFAULT_SEED,
                 norm: Optional[LogNormalizer] = None) -> SampleBatch:
    if int(n) != n or n < 1:
        raise InvalidConfig(f"n must be an integer >= 1 (got {n!r})")
    if not 0 <= int(seed) < 2**64:
        raise InvalidConfig(f"seed must be an unsigned 64-bit integer (got {seed!r})")

    table = marginal_table(params, norm)
    stream = UniformStream(seed)
    xs = np.empty(int(n), dtype=np.int64)
    ys = np.empty(int(n), dtype=float)
    for i in range(int(n)):
        x = int(table.quantile(stream.uniform()))
        xs[i] = x
        ys[i] = gamma_variate(params.m02 + params.m12 * x, params.m01 + params.m11 * x, stream)

    logger.debug("exact sample for %s: n=%d, table size %d", params, n, len(table.cdf))
    return SampleBatch(x=xs, y=ys, generator='exact', config={'n': int(n), 'seed': int(seed)})


def draw(params, n: int, seed: int, method: str = 'exact', **gibbs_options) -> SampleBatch:
    """Dispatch to the exact or Gibbs generator by name."""
    if method == 'exact':
        return exact_sample(params, n, seed)
    if method == 'gibbs':
        return gibbs_sample(params, GibbsConfig(n=n, seed=seed, **gibbs_options))
    raise InvalidConfig(f"unknown sampler {method!r}; expected 'exact' or 'gibbs'")
