"""Normalizing constant of the joint density.

The constant is c = -log S with S = sum_x w_x and

    log w_x = logGamma(m02 + m12 x) + m10 x - (m02 + m12 x) log(m01 + m11 x) - logGamma(x + 1),

i.e. w_x is the y-integral of the unnormalized density at x. The series is
summed in log space in blocks; the log terms that were summed are kept on the
result so the likelihood gradient and the x-marginal can reuse them.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .errors import InvalidConfig, NoConvergence, NumericalOverflow
from .params import Params

logger = logging.getLogger(__name__)

DEFAULT_REL_TOL = 1e-12
MAX_TERMS = 100_000
STABLE_RUN = 50
BLOCK_SIZE = 256


def log_series_terms(params: Params, start: int, stop: int) -> np.ndarray:
    """log w_x for x in [start, stop)."""
    x = np.arange(start, stop, dtype=float)
    shape = params.m02 + params.m12 * x
    rate = params.m01 + params.m11 * x
    return gammaln(shape) + params.m10 * x - shape * np.log(rate) - gammaln(x + 1.0)


def limiting_log_ratio(params: Params) -> float:
    """Limit of log(w_{x+1} / w_x); finite only in the compound-Poisson case."""
    if params.m11 == 0.0 and params.m12 == 1.0:
        return params.m10 - math.log(params.m01)
    return -math.inf


@dataclass(frozen=True)
class LogNormalizer:
    """The log-scale constant c with its truncation metadata."""

    c: float
    terms_used: int
    tail_bound: float
    rel_tol: float
    log_terms: np.ndarray = field(repr=False, compare=False)

    @property
    def log_sum(self) -> float:
        return -self.c

    def pmf(self) -> np.ndarray:
        """x-marginal probabilities over the summed range."""
        return np.exp(self.log_terms + self.c)

    def as_dict(self) -> dict:
        return {
            'c': float(self.c),
            'terms_used': int(self.terms_used),
            'tail_bound': float(self.tail_bound),
            'rel_tol': float(self.rel_tol),
        }


def _tail_bound(log_rel: float, log_ratio: float) -> float:
    """Geometric bound on the truncated mass relative to the running sum."""
    if log_ratio >= 0.0:
        return math.inf
    ratio = math.exp(log_ratio)
    return math.exp(log_rel) * ratio / (1.0 - ratio)


def log_normalizer(params: Params, rel_tol: float = DEFAULT_REL_TOL,
                   max_terms: int = MAX_TERMS) -> LogNormalizer:
    """Sum the normalizing series until it has converged to ``rel_tol``.

    Summation stops once STABLE_RUN consecutive terms have each been decreasing
    and below ``rel_tol`` of the running sum, and the geometric bound on the
    remaining tail is itself below ``rel_tol``.
    """
    if not 0.0 < rel_tol < 1.0:
        raise InvalidConfig(f"rel_tol must lie in (0, 1), got {rel_tol!r}")

    log_tol = math.log(rel_tol)
    limit = limiting_log_ratio(params)
    chunks = []
    log_sum = -math.inf
    prev_term = math.inf
    run = 0
    start = 0

    while start < max_terms:
        stop = min(start + BLOCK_SIZE, max_terms)
        terms = log_series_terms(params, start, stop)
        if not np.all(np.isfinite(terms)):
            raise NumericalOverflow(f"non-finite series term for {params} near x={start}")

        running = np.logaddexp.accumulate(np.concatenate(([log_sum], terms)))[1:]
        for i, term in enumerate(terms):
            log_rel = term - running[i]
            if log_rel < log_tol and term < prev_term:
                run += 1
            else:
                run = 0
            log_ratio = max(term - prev_term, limit)
            prev_term = term
            if run >= STABLE_RUN:
                tail = _tail_bound(log_rel, log_ratio)
                if tail <= rel_tol:
                    chunks.append(terms[:i + 1])
                    log_terms = np.concatenate(chunks)
                    log_terms.setflags(write=False)
                    total = float(running[i])
                    logger.debug("normalizer for %s: %d terms, tail %.3g", params, start + i + 1, tail)
                    return LogNormalizer(
                        c=-total,
                        terms_used=start + i + 1,
                        tail_bound=tail,
                        rel_tol=rel_tol,
                        log_terms=log_terms,
                    )

        chunks.append(terms)
        log_sum = float(running[-1])
        start = stop

    raise NoConvergence(max_terms)
