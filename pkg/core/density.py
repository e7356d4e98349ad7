"""Joint, marginal and conditional densities of the BPGC distribution.

All functions work in log space and accept scalars or numpy arrays. The
normalizer ``norm`` is optional everywhere; pass one to avoid recomputing the
series when evaluating many points.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate
from scipy.special import digamma, gammainc, gammaincinv, gammaln, logsumexp

from .errors import InvalidConfig, InvalidProbability, NoConvergence
from .normalizer import BLOCK_SIZE, MAX_TERMS, LogNormalizer, log_normalizer, log_series_terms
from .params import GammaConditional, Params, check_counts, check_positive, gamma_shape_rate

# Relative mass below which a marginal table stops growing.
TABLE_TAIL = 1e-17


def _norm(params: Params, norm: Optional[LogNormalizer]) -> LogNormalizer:
    return norm if norm is not None else log_normalizer(params)


def _scalar_or_array(value):
    arr = np.asarray(value)
    return arr.item() if arr.ndim == 0 else arr


def log_pdf(params: Params, x, y, norm: Optional[LogNormalizer] = None, continuous_x: bool = False):
    """Log of the joint density f(x, y).

    With ``continuous_x`` the factorial is extended through logGamma so x may
    be any non-negative real (used for derivative checks).
    """
    x = check_counts(x, continuous=continuous_x)
    y = check_positive(y)
    c = _norm(params, norm).c
    log_y = np.log(y)
    value = (
        -gammaln(x + 1.0) - log_y + c + params.m10 * x - params.m01 * y
        - params.m11 * x * y + params.m02 * log_y + params.m12 * x * log_y
    )
    return _scalar_or_array(value)


def log_pmf_x(params: Params, x, norm: Optional[LogNormalizer] = None):
    """Log of the x-marginal probability mass function."""
    x = check_counts(x)
    c = _norm(params, norm).c
    shape, rate = gamma_shape_rate(params, x)
    value = gammaln(shape) + c + params.m10 * x - gammaln(x + 1.0) - shape * np.log(rate)
    return _scalar_or_array(value)


def log_pdf_y(params: Params, y, norm: Optional[LogNormalizer] = None):
    """Log of the y-marginal density."""
    y = check_positive(y)
    c = _norm(params, norm).c
    log_y = np.log(y)
    intensity = np.exp(params.m10 - params.m11 * y + params.m12 * log_y)
    value = (params.m02 - 1.0) * log_y + intensity + c - params.m01 * y
    return _scalar_or_array(value)


def conditional_poisson_mean(params: Params, y):
    """Mean of X given Y = y, exp(m10 - m11 y + m12 log y)."""
    y = check_positive(y)
    return _scalar_or_array(np.exp(params.m10 - params.m11 * y + params.m12 * np.log(y)))


def conditional_gamma(params: Params, x) -> GammaConditional:
    """Gamma law of Y given X = x (shape m02 + m12 x, rate m01 + m11 x)."""
    x = float(check_counts(x))
    return GammaConditional(shape=params.m02 + params.m12 * x, rate=params.m01 + params.m11 * x)


@dataclass(frozen=True)
class MarginalTable:
    """Cumulative x-marginal probabilities for x = 0 .. len(cdf) - 1."""

    pmf: np.ndarray
    cdf: np.ndarray

    def quantile(self, u):
        idx = np.searchsorted(self.cdf, np.asarray(u, dtype=float), side='left')
        return _scalar_or_array(np.minimum(idx, len(self.cdf) - 1))


def marginal_table(params: Params, norm: Optional[LogNormalizer] = None,
                   u_max: float = 1.0, max_terms: int = MAX_TERMS) -> MarginalTable:
    """Grow the x-marginal table until its cdf reaches ``u_max``.

    Growth also stops once terms are decreasing and negligible (TABLE_TAIL);
    rounding can keep the summed cdf just below 1.
    """
    norm = _norm(params, norm)
    log_pmf = [np.asarray(norm.log_terms) + norm.c]
    total = float(np.exp(logsumexp(log_pmf[0])))
    start = len(log_pmf[0])
    log_floor = math.log(TABLE_TAIL)

    while total < u_max:
        last = log_pmf[-1]
        if len(last) >= 2 and last[-1] < log_floor and last[-1] < last[-2]:
            break
        if start >= max_terms:
            raise NoConvergence(max_terms)
        block = log_series_terms(params, start, min(start + BLOCK_SIZE, max_terms)) + norm.c
        log_pmf.append(block)
        total += float(np.exp(logsumexp(block)))
        start += len(block)

    pmf = np.exp(np.concatenate(log_pmf))
    return MarginalTable(pmf=pmf, cdf=np.cumsum(pmf))


def cdf_x(params: Params, x, norm: Optional[LogNormalizer] = None):
    """P(X <= x) for integer x (right-continuous step function)."""
    x = check_counts(x)
    norm = _norm(params, norm)
    cdf = np.minimum(np.cumsum(norm.pmf()), 1.0)
    # mass past the summed range is within the certified tail bound
    k = x.astype(np.int64)
    inside = k < len(cdf)
    out = np.ones(k.shape, dtype=float)
    out[inside] = cdf[k[inside]]
    return _scalar_or_array(out)


def quantile_x(params: Params, u, norm: Optional[LogNormalizer] = None, max_terms: int = MAX_TERMS):
    """Smallest x with P(X <= x) >= u, for u in (0, 1)."""
    u = np.asarray(u, dtype=float)
    if np.any(~np.isfinite(u)) or np.any(u <= 0.0) or np.any(u >= 1.0):
        raise InvalidProbability("u must lie strictly inside (0, 1)")
    table = marginal_table(params, norm, u_max=float(np.max(u)), max_terms=max_terms)
    return table.quantile(u)


def y_upper_limit(params: Params, norm: Optional[LogNormalizer] = None, tail: float = 1e-12) -> float:
    """A y beyond which every relevant Gamma conditional has mass below ``tail``."""
    table = marginal_table(params, norm)
    x = np.arange(len(table.pmf), dtype=float)
    shape, rate = gamma_shape_rate(params, x)
    keep = table.pmf > tail * 1e-3
    return float(np.max(gammaincinv(shape[keep], 1.0 - tail) / rate[keep]))


def y_split_point(params: Params, norm: Optional[LogNormalizer] = None) -> float:
    """Conditional mode (or mean) at the most probable x, used to split quadrature."""
    table = marginal_table(params, norm)
    gamma = conditional_gamma(params, int(np.argmax(table.pmf)))
    return gamma.mode if gamma.mode is not None else gamma.mean


def cdf_y(params: Params, t, norm: Optional[LogNormalizer] = None, method: str = 'mixture'):
    """P(Y <= t).

    ``mixture`` sums f_X(x) * P(Gamma(shape_x, rate_x) <= t) over the x-marginal
    table; ``quadrature`` integrates the y-marginal density numerically.
    """
    t = check_positive(t)
    norm = _norm(params, norm)
    if method == 'mixture':
        table = marginal_table(params, norm)
        x = np.arange(len(table.pmf), dtype=float)
        shape, rate = gamma_shape_rate(params, x)
        probs = gammainc(shape[:, None], rate[:, None] * np.atleast_1d(t)[None, :])
        value = np.minimum(table.pmf @ probs, 1.0)
        return _scalar_or_array(value.reshape(t.shape))
    if method == 'quadrature':
        split = y_split_point(params, norm)
        values = [_integrate_y_marginal(params, norm, float(ti), split) for ti in np.atleast_1d(t)]
        return _scalar_or_array(np.minimum(np.array(values).reshape(t.shape), 1.0))
    raise InvalidConfig(f"unknown cdf_y method {method!r}")


def _integrate_y_marginal(params: Params, norm: LogNormalizer, upper: float, split: float) -> float:
    def density(y):
        return math.exp(log_pdf_y(params, y, norm)) if y > 0 else 0.0

    points = [split] if 0.0 < split < upper else None
    value, _ = integrate.quad(density, 0.0, upper, points=points, epsabs=1e-13, epsrel=1e-11, limit=400)
    return value


@dataclass(frozen=True)
class Moments:
    mean_x: float
    var_x: float
    mean_y: float
    var_y: float
    cov_xy: float
    mean_log_y: float
    mean_x_log_y: float

    @property
    def corr_xy(self) -> float:
        return self.cov_xy / math.sqrt(self.var_x * self.var_y)

    def as_dict(self) -> dict:
        out = dict(self.__dict__)
        out['corr_xy'] = self.corr_xy
        return out


def moments(params: Params, norm: Optional[LogNormalizer] = None) -> Moments:
    """Numerical moments from the x-marginal series and the Gamma conditionals."""
    table = marginal_table(params, norm)
    p = table.pmf / table.pmf.sum()
    x = np.arange(len(p), dtype=float)
    shape, rate = gamma_shape_rate(params, x)
    cond_mean = shape / rate
    cond_second = shape * (shape + 1.0) / rate**2
    cond_log = digamma(shape) - np.log(rate)

    mean_x = float(p @ x)
    mean_y = float(p @ cond_mean)
    return Moments(
        mean_x=mean_x,
        var_x=float(p @ (x - mean_x) ** 2),
        mean_y=mean_y,
        var_y=float(p @ cond_second - mean_y**2),
        cov_xy=float(p @ (x * cond_mean) - mean_x * mean_y),
        mean_log_y=float(p @ cond_log),
        mean_x_log_y=float(p @ (x * cond_log)),
    )
