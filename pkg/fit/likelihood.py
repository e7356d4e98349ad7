"""Log-likelihood, score and Fisher information of the BPGC family.

The model is a five-parameter exponential family with sufficient statistics
T = (sum x, -sum y, -sum xy, sum log y, sum x log y) and log-partition
-c(theta) = log sum_x w_x(theta). Derivatives of c are expectations of the
per-term derivatives of log w_x under the x-marginal, so one normalizer pass
serves the value, the gradient and the information.
"""

from typing import Optional

import numpy as np
from scipy.special import digamma, logsumexp, polygamma, softmax

from core.dataset import Dataset
from core.normalizer import LogNormalizer, log_normalizer
from core.params import Params


def _norm(params: Params, norm: Optional[LogNormalizer]) -> LogNormalizer:
    return norm if norm is not None else log_normalizer(params)


def signed_suffstats(data: Dataset) -> np.ndarray:
    """T with the signs of the exponent, so that the kernel is theta . T."""
    sx, sy, sxy, slog, sxlog = data.suffstats
    return np.array([sx, -sy, -sxy, slog, sxlog])


def _term_derivatives(params: Params, n_terms: int):
    x = np.arange(n_terms, dtype=float)
    shape = params.m02 + params.m12 * x
    rate = params.m01 + params.m11 * x
    log_rate = np.log(rate)
    dlog = digamma(shape) - log_rate
    g = np.vstack([x, -shape / rate, -x * shape / rate, dlog, x * dlog])
    return x, shape, rate, g


def log_normalizer_gradient(params: Params, norm: Optional[LogNormalizer] = None) -> np.ndarray:
    """dc/dtheta = -E[g(X)], each expectation summed in log space with signs."""
    norm = _norm(params, norm)
    _, _, _, g = _term_derivatives(params, len(norm.log_terms))
    out = np.empty(5)
    for j in range(5):
        value, sign = logsumexp(norm.log_terms, b=g[j], return_sign=True)
        out[j] = -sign * np.exp(value - norm.log_sum)
    return out


def log_likelihood(params: Params, data: Dataset, norm: Optional[LogNormalizer] = None) -> float:
    norm = _norm(params, norm)
    kernel = float(params.as_array() @ signed_suffstats(data))
    return -data.sum_log_factorial - data.sum_log_y + data.n * norm.c + kernel


def gradient(params: Params, data: Dataset, norm: Optional[LogNormalizer] = None) -> np.ndarray:
    """Score vector n * dc/dtheta + T."""
    norm = _norm(params, norm)
    return data.n * log_normalizer_gradient(params, norm) + signed_suffstats(data)


def fisher_information(params: Params, norm: Optional[LogNormalizer] = None) -> np.ndarray:
    """Per-observation information, the Hessian of log sum_x w_x.

    Computed as E[d2 log w] + Cov(d log w) under the x-marginal. The m10 row
    of d2 log w vanishes since log w_x is linear in m10.
    """
    norm = _norm(params, norm)
    x, shape, rate, g = _term_derivatives(params, len(norm.log_terms))
    p = softmax(norm.log_terms)

    mean = g @ p
    cov = (g * p) @ g.T - np.outer(mean, mean)

    trigamma = polygamma(1, shape)
    ratio = shape / rate**2
    second = np.zeros((5, 5, len(x)))
    second[1, 1] = ratio
    second[1, 2] = x * ratio
    second[1, 3] = -1.0 / rate
    second[1, 4] = -x / rate
    second[2, 2] = x**2 * ratio
    second[2, 3] = -x / rate
    second[2, 4] = -x**2 / rate
    second[3, 3] = trigamma
    second[3, 4] = x * trigamma
    second[4, 4] = x**2 * trigamma
    hess = second @ p
    hess = np.triu(hess) + np.triu(hess, 1).T
    return hess + cov
