"""Shape and dependence diagnostics.

Everything here is evaluated numerically on user-supplied grids; a flag that
holds on a grid is reported as holding on that grid only.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from scipy.special import digamma, gammainc, pdtr

from .density import (
    _norm, _scalar_or_array, cdf_y, conditional_gamma, conditional_poisson_mean,
    log_pdf, log_pdf_y, marginal_table,
)
from .errors import InvalidGrid
from .normalizer import LogNormalizer
from .params import Params, check_counts, check_positive, gamma_shape_rate

logger = logging.getLogger(__name__)

# Absolute slack for sign checks on quantities computed from log densities.
SIGN_TOL = 1e-9


def local_dependence(params: Params, y):
    """Mixed derivative of log f in (x, y): m12 / y - m11, free of x."""
    y = check_positive(y)
    return _scalar_or_array(params.m12 / y - params.m11)


def score_x(params: Params, x, y):
    """d log f / dx with x extended to the reals through logGamma."""
    x = check_counts(x, continuous=True)
    y = check_positive(y)
    value = -digamma(x + 1.0) + params.m10 - params.m11 * y + params.m12 * np.log(y)
    return _scalar_or_array(value)


def score_y(params: Params, x, y):
    """d log f / dy."""
    x = check_counts(x, continuous=True)
    y = check_positive(y)
    value = (-params.m01 * y + params.m02 - params.m11 * x * y + params.m12 * x - 1.0) / y
    return _scalar_or_array(value)


def find_conditional_mode(params: Params, x) -> Optional[float]:
    """Interior mode of Y | X = x, or None when the mode sits at y = 0."""
    return conditional_gamma(params, x).mode


def _check_y_grid(y_grid: Sequence[float]) -> np.ndarray:
    ys = np.asarray(y_grid, dtype=float)
    if ys.ndim != 1 or len(ys) < 2:
        raise InvalidGrid("y grid needs at least two points")
    if not np.all(np.isfinite(ys)) or np.any(ys <= 0.0):
        raise InvalidGrid("y grid must be positive and finite")
    if np.any(np.diff(ys) <= 0.0):
        raise InvalidGrid("y grid must be strictly increasing")
    return ys


@dataclass
class DependenceReport:
    """Result of :func:`dependence_report`."""

    x_max: int
    y_grid: np.ndarray
    min_det_stat: float
    max_det_stat: float
    is_independent: bool
    is_compound_poisson: bool
    is_log_convex: bool
    is_rr2: bool
    tp2_on_grid: bool
    rr2_on_grid: bool
    local_dependence_positive: int
    local_dependence_negative: int
    local_dependence_zero: int
    local_dependence_threshold: Optional[float]
    x_given_y_cdf_nonincreasing: bool
    y_given_x_cdf_nonincreasing: bool
    det_stats: np.ndarray = field(repr=False)

    def as_dict(self) -> dict:
        return {
            'x_max': self.x_max,
            'y_grid': [float(v) for v in self.y_grid],
            'min_det_stat': self.min_det_stat,
            'max_det_stat': self.max_det_stat,
            'flags': {
                'is_independent': self.is_independent,
                'is_compound_poisson': self.is_compound_poisson,
                'is_log_convex': self.is_log_convex,
                'is_rr2': self.is_rr2,
                'tp2_on_grid': self.tp2_on_grid,
                'rr2_on_grid': self.rr2_on_grid,
            },
            'local_dependence': {
                'positive': self.local_dependence_positive,
                'negative': self.local_dependence_negative,
                'zero': self.local_dependence_zero,
                'threshold': self.local_dependence_threshold,
            },
            'tp2_implications': {
                'x_given_y_cdf_nonincreasing': self.x_given_y_cdf_nonincreasing,
                'y_given_x_cdf_nonincreasing': self.y_given_x_cdf_nonincreasing,
            },
        }


def _pairwise_extremes(logf: np.ndarray):
    """Min and max of the 2x2 log-determinant statistic over all grid pairs.

    ``logf`` is indexed [x, y]. For fixed x1 < x2 the statistic for y1 < y2 is
    D[y2] - D[y1] with D = logf[x2] - logf[x1], so its extremes follow from
    running extremes of D.
    """
    nx = logf.shape[0]
    low, high = math.inf, -math.inf
    per_pair = np.zeros((nx, nx))
    for i in range(nx - 1):
        d = logf[i + 1:] - logf[i]
        run_max = np.maximum.accumulate(d, axis=1)[:, :-1]
        run_min = np.minimum.accumulate(d, axis=1)[:, :-1]
        pair_min = np.min(d[:, 1:] - run_max, axis=1)
        pair_max = np.max(d[:, 1:] - run_min, axis=1)
        per_pair[i, i + 1:] = pair_min
        per_pair[i + 1:, i] = pair_max
        low = min(low, float(pair_min.min()))
        high = max(high, float(pair_max.max()))
    return low, high, per_pair


def dependence_report(params: Params, x_max: int, y_grid: Sequence[float],
                      norm: Optional[LogNormalizer] = None) -> DependenceReport:
    """TP2 / RR2 evidence on the grid {0..x_max} x y_grid.

    ``det_stats`` holds, for x1 < x2, the minimum statistic over y-pairs in the
    upper triangle [x1, x2] and the maximum in the lower triangle [x2, x1].
    """
    if int(x_max) != x_max or x_max < 1:
        raise InvalidGrid("x_max must be an integer >= 1")
    x_max = int(x_max)
    ys = _check_y_grid(y_grid)
    norm = _norm(params, norm)

    xs = np.arange(x_max + 1)
    logf = np.vstack([log_pdf(params, np.full_like(ys, x), ys, norm) for x in xs])
    low, high, per_pair = _pairwise_extremes(logf)

    xi = np.asarray(local_dependence(params, ys))
    threshold = params.m12 / params.m11 if params.m11 > 0.0 else None

    lam = np.asarray(conditional_poisson_mean(params, ys))
    x_cdf = pdtr(xs[:, None], lam[None, :])
    shape, rate = gamma_shape_rate(params, xs)
    y_cdf = gammainc(shape[:, None], rate[:, None] * ys[None, :])

    report = DependenceReport(
        x_max=x_max,
        y_grid=ys,
        min_det_stat=low,
        max_det_stat=high,
        is_independent=params.is_independent,
        is_compound_poisson=params.is_compound_poisson,
        is_log_convex=params.m11 > 0.0,
        is_rr2=params.m11 > params.m12,
        tp2_on_grid=low >= -SIGN_TOL,
        rr2_on_grid=high <= SIGN_TOL,
        local_dependence_positive=int(np.sum(xi > 0.0)),
        local_dependence_negative=int(np.sum(xi < 0.0)),
        local_dependence_zero=int(np.sum(xi == 0.0)),
        local_dependence_threshold=threshold,
        x_given_y_cdf_nonincreasing=bool(np.all(np.diff(x_cdf, axis=1) <= SIGN_TOL)),
        y_given_x_cdf_nonincreasing=bool(np.all(np.diff(y_cdf, axis=0) <= SIGN_TOL)),
        det_stats=per_pair,
    )
    logger.debug("dependence report for %s: det range [%.3g, %.3g]", params, low, high)
    return report


@dataclass
class OrderingReport:
    """Grid evaluation of the usual, hazard-rate, mean-residual-life and
    likelihood-ratio comparisons of X against Y.

    ``table`` has one row per grid point t; ``integer_table`` one row per
    integer k >= 1 covered by the grid (hazards and the density ratio).
    """

    table: pd.DataFrame
    integer_table: pd.DataFrame
    st_holds: bool
    hr_holds: bool
    mrl_holds: bool
    lr_holds: bool
    conditions_met: bool

    def as_dict(self) -> dict:
        return {
            'st_holds': self.st_holds,
            'hr_holds': self.hr_holds,
            'mrl_holds': self.mrl_holds,
            'lr_holds': self.lr_holds,
            'conditions_met': self.conditions_met,
            'grid': self.table.to_dict(orient='list'),
            'integer_grid': self.integer_table.to_dict(orient='list'),
        }


def _gamma_excess(shape: np.ndarray, rate: np.ndarray, t: float) -> np.ndarray:
    """E[(Y - t)+] for Y ~ Gamma(shape, rate), componentwise."""
    return (shape / rate) * (1.0 - gammainc(shape + 1.0, rate * t)) - t * (1.0 - gammainc(shape, rate * t))


def ordering_diagnostics(params: Params, t_grid: Sequence[float],
                         norm: Optional[LogNormalizer] = None,
                         method: str = 'quadrature') -> OrderingReport:
    """Compare the marginals of X and Y on ``t_grid``.

    X >=st Y needs F_X(t) <= F_Y(t); X >=hr Y needs h_X <= h_Y; X >=mrl Y
    needs m_X(t) >= m_Y(t); X >=lr Y needs f_X / f_Y non-decreasing. F_Y
    comes from ``cdf_y`` with the requested ``method``.
    """
    ts = _check_y_grid(t_grid)
    norm = _norm(params, norm)
    table = marginal_table(params, norm)
    pmf = table.pmf / table.pmf.sum()
    cdf = np.minimum(np.cumsum(pmf), 1.0)
    support = np.arange(len(pmf), dtype=float)

    idx = np.minimum(np.floor(ts).astype(np.int64), len(cdf) - 1)
    f_x = cdf[idx]
    f_y = np.atleast_1d(cdf_y(params, ts, norm, method=method))

    shape, rate = gamma_shape_rate(params, support)
    mrl_x = np.empty_like(ts)
    mrl_y = np.empty_like(ts)
    for i, t in enumerate(ts):
        surv_x = 1.0 - f_x[i]
        excess_x = float(pmf @ np.maximum(support - t, 0.0))
        mrl_x[i] = excess_x / surv_x if surv_x > 0.0 else math.nan
        surv_y = 1.0 - f_y[i]
        excess_y = float(pmf @ _gamma_excess(shape, rate, float(t)))
        mrl_y[i] = excess_y / surv_y if surv_y > 0.0 else math.nan

    grid = pd.DataFrame({
        't': ts,
        'cdf_x': f_x,
        'cdf_y': f_y,
        'st': f_x <= f_y + SIGN_TOL,
        'mrl_x': mrl_x,
        'mrl_y': mrl_y,
        # X >=mrl Y: residual life of X dominates, m_X(t) >= m_Y(t)
        'mrl': mrl_x >= mrl_y - SIGN_TOL,
    })

    ks = np.arange(max(1, math.ceil(ts[0])), min(math.floor(ts[-1]), len(pmf) - 1) + 1)
    if len(ks):
        fx_k = pmf[ks]
        surv_x_k = 1.0 - cdf[ks - 1]
        fy_k = np.exp(np.atleast_1d(log_pdf_y(params, ks.astype(float), norm)))
        surv_y_k = 1.0 - np.atleast_1d(cdf_y(params, ks.astype(float), norm, method=method))
        with np.errstate(divide='ignore', invalid='ignore'):
            h_x = fx_k / surv_x_k
            h_y = fy_k / surv_y_k
            ratio = fx_k / fy_k
    else:
        fx_k = fy_k = h_x = h_y = ratio = np.empty(0)

    integer = pd.DataFrame({
        'k': ks.astype(np.int64),
        'pmf_x': fx_k,
        'pdf_y': fy_k,
        'hazard_x': h_x,
        'hazard_y': h_y,
        'hr': h_x <= h_y + SIGN_TOL,
        'ratio': ratio,
    })

    finite_mrl = grid[np.isfinite(grid['mrl_x']) & np.isfinite(grid['mrl_y'])]
    finite_ratio = ratio[np.isfinite(ratio)]
    return OrderingReport(
        table=grid,
        integer_table=integer,
        st_holds=bool(grid['st'].all()),
        hr_holds=bool(integer['hr'].all()),
        mrl_holds=bool(finite_mrl['mrl'].all()),
        lr_holds=bool(np.all(np.diff(finite_ratio) >= -SIGN_TOL * np.abs(finite_ratio[1:]))),
        conditions_met=params.m12 >= 1.0,
    )


@dataclass(frozen=True)
class RegressionCurves:
    x: np.ndarray
    mean_y_given_x: np.ndarray
    y: np.ndarray
    mean_x_given_y: np.ndarray


def regression_curves(params: Params, x_values, y_values) -> RegressionCurves:
    """E(Y | X = x) = (m02 + m12 x) / (m01 + m11 x) and E(X | Y = y)."""
    xs = check_counts(np.atleast_1d(x_values))
    ys = check_positive(np.atleast_1d(y_values))
    shape, rate = gamma_shape_rate(params, xs)
    return RegressionCurves(
        x=xs,
        mean_y_given_x=shape / rate,
        y=ys,
        mean_x_given_y=np.atleast_1d(conditional_poisson_mean(params, ys)),
    )
