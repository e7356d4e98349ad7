"""Goodness-of-fit pipelines built on the two-sample test.

``fitted_gof`` treats the data as the first sample, fits the model, simulates
a second sample from the fit and tests the two. ``compare_fitted_to_truth``
is the simulation-study reading: a sample from the fitted parameters against
a sample from the true ones.
"""

import logging
from dataclasses import replace
from typing import Optional, Tuple

from core.dataset import Dataset
from core.params import Params
from fit.barrier import MleConfig, MleResult, fit_mle
from sample.exact import draw
from sample.rng import derive_seed

from .ff import GofConfig, GofResult, ff_test

logger = logging.getLogger(__name__)


def fitted_gof(data: Dataset, cfg: Optional[GofConfig] = None,
               mle_cfg: Optional[MleConfig] = None) -> Tuple[MleResult, GofResult]:
    cfg = cfg or GofConfig()
    mle = fit_mle(data, mle_cfg)
    n_sim = cfg.n_sim or data.n
    simulated = draw(mle.estimates, n_sim, derive_seed(cfg.seed, 0), cfg.sampler)
    result = ff_test(data, simulated, replace(cfg, seed=derive_seed(cfg.seed, 1)))
    logger.info("fitted gof: d=%.6g p=%.4g (n=%d, n_sim=%d)", result.d_stat, result.p_value, data.n, n_sim)
    return mle, result


def compare_fitted_to_truth(truth: Params, estimates: Params, n: int,
                            cfg: Optional[GofConfig] = None) -> GofResult:
    cfg = cfg or GofConfig()
    from_truth = draw(truth, n, derive_seed(cfg.seed, 0), cfg.sampler)
    from_fit = draw(estimates, n, derive_seed(cfg.seed, 1), cfg.sampler)
    return ff_test(from_fit, from_truth, replace(cfg, seed=derive_seed(cfg.seed, 2)))
