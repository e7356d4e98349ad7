"""Constrained maximum likelihood by an adaptive log-barrier method.

The outer loop shrinks the barrier weight mu geometrically; each inner loop
maximizes the per-observation penalized objective

    phi(theta) = loglik(theta) / n + mu * [sum_strict log theta_j + sum_inter log(theta_j + EPS_B)]

with Fisher-scoring steps (the exact Hessian of loglik / n is minus the
expected information, so each step is a quasi-Newton step with a model-based
curvature), a fraction-to-boundary rule and Armijo backtracking. Proposals
outside the admissible domain are halved away. Interaction parameters left
near zero are finally clamped to the boundary when the likelihood pushes
outward there.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from core.dataset import Dataset
from core.errors import (
    BoundaryOptimum, DidNotConverge, InvalidConfig, InvalidParameter, NoConvergence,
    NonIdentifiable, NumericalOverflow, SingularInformation,
)
from core.normalizer import DEFAULT_REL_TOL, LogNormalizer, log_normalizer
from core.params import Params, validate_params

from .information import observed_information, std_errors
from .likelihood import fisher_information, gradient, log_likelihood

logger = logging.getLogger(__name__)

MIN_SAMPLE = 5
EPS_B = 1e-10
FRACTION_TO_BOUNDARY = 0.99
ARMIJO = 1e-4
MAX_HALVINGS = 60
START_FLOOR = 1e-3
START_CEILING = 1e3
INNER_GRAD_SHARE = 0.1

_INFEASIBLE = (InvalidParameter, NoConvergence, NumericalOverflow)
_OFFSETS = np.array([EPS_B if name in Params.INTERACTIONS else 0.0 for name in Params.NAMES])


@dataclass(frozen=True)
class MleConfig:
    init: Tuple[float, ...] = (1.0, 1.0, 1.0, 1.0, 1.0)
    barrier_mu0: float = 1.0
    barrier_shrink: float = 0.2
    outer_iters: int = 12
    inner_tol: float = 1e-8
    max_inner_iters: int = 500
    grad_tol: float = 1e-4
    clamp_tol: float = 1e-8
    warm_start: bool = False
    rel_tol: float = DEFAULT_REL_TOL
    compute_std_errors: bool = True

    def __post_init__(self):
        if len(self.init) != 5 or not all(math.isfinite(float(v)) for v in self.init):
            raise InvalidConfig("init must be 5 finite values")
        if not self.barrier_mu0 > 0.0:
            raise InvalidConfig(f"barrier_mu0 must be positive (got {self.barrier_mu0!r})")
        if not 0.0 < self.barrier_shrink < 1.0:
            raise InvalidConfig(f"barrier_shrink must lie in (0, 1) (got {self.barrier_shrink!r})")
        if self.outer_iters < 1 or self.max_inner_iters < 1:
            raise InvalidConfig("outer_iters and max_inner_iters must be >= 1")
        for name in ('inner_tol', 'grad_tol', 'clamp_tol', 'rel_tol'):
            if not getattr(self, name) > 0.0:
                raise InvalidConfig(f"{name} must be positive")

    def as_dict(self) -> dict:
        out = asdict(self)
        out['init'] = [float(v) for v in self.init]
        return out


@dataclass(frozen=True)
class TraceEntry:
    round: int
    mu: float
    loglik: float
    penalized: float
    grad_norm: float
    inner_iters: int
    movement: float
    inner_ok: bool


@dataclass
class MleResult:
    estimates: Params
    loglik: float
    converged: bool
    trace: List[TraceEntry]
    n: int
    grad_norm: float
    start: Params
    boundary: Tuple[str, ...] = ()
    std_errors: Optional[np.ndarray] = None
    std_error_note: Optional[str] = None
    information: Optional[np.ndarray] = field(default=None, repr=False)

    def as_dict(self) -> dict:
        return {
            'estimates': self.estimates.as_dict(),
            'loglik': float(self.loglik),
            'converged': bool(self.converged),
            'n': int(self.n),
            'grad_norm': float(self.grad_norm),
            'start': self.start.as_dict(),
            'boundary': list(self.boundary),
            'std_errors': None if self.std_errors is None else dict(zip(Params.NAMES, map(float, self.std_errors))),
            'std_error_note': self.std_error_note,
            'trace': [asdict(t) for t in self.trace],
        }


@dataclass(frozen=True)
class _Point:
    theta: np.ndarray
    params: Params
    norm: LogNormalizer
    loglik: float
    grad: np.ndarray


class _BarrierProblem:
    """Evaluation of the scaled likelihood and its barrier for one dataset."""

    def __init__(self, data: Dataset, rel_tol: float):
        self.data = data
        self.n = data.n
        self.rel_tol = rel_tol

    def evaluate(self, theta: np.ndarray) -> _Point:
        params = validate_params(theta)
        norm = log_normalizer(params, self.rel_tol)
        loglik = log_likelihood(params, self.data, norm)
        grad = gradient(params, self.data, norm) / self.n
        if not math.isfinite(loglik) or not np.all(np.isfinite(grad)):
            raise NumericalOverflow(f"non-finite likelihood at {params}")
        return _Point(np.asarray(theta, dtype=float), params, norm, loglik, grad)

    def penalized(self, point: _Point, mu: float):
        shifted = point.theta + _OFFSETS
        value = point.loglik / self.n + mu * float(np.sum(np.log(shifted)))
        return value, point.grad + mu / shifted

    def curvature(self, point: _Point, mu: float) -> np.ndarray:
        shifted = point.theta + _OFFSETS
        return fisher_information(point.params, point.norm) + np.diag(mu / shifted**2)


def moment_start(data: Dataset) -> Params:
    """Warm start from the independence-model moments of the data."""
    mean_x = float(np.mean(data.x))
    mean_y = float(np.mean(data.y))
    var_y = float(np.var(data.y))
    m10 = max(math.log(max(mean_x, 1e-12)), 0.05)
    m01 = mean_y / var_y if var_y > 0.0 else 1.0
    m02 = m01 * mean_y
    raw = np.clip([m10, m01, 0.01, m02, 0.01], START_FLOOR, START_CEILING)
    return validate_params(raw)


def _project(theta: Sequence[float]) -> np.ndarray:
    """Move a start point strictly inside every constraint."""
    return np.clip(np.asarray(theta, dtype=float), START_FLOOR, None)


def _check_identifiable(data: Dataset):
    if data.n < MIN_SAMPLE:
        raise NonIdentifiable(f"need at least {MIN_SAMPLE} observations to fit 5 parameters (got {data.n})")
    if len(np.unique(data.x)) < 2:
        raise NonIdentifiable("all x values are equal")
    if len(np.unique(data.y)) < 2:
        raise NonIdentifiable("all y values are equal")


def _relative_move(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(a), 1.0)))


def _inner_loop(problem: _BarrierProblem, point: _Point, mu: float, cfg: MleConfig):
    """Maximize phi for fixed mu. Returns (point, iterations, ok)."""
    for it in range(1, cfg.max_inner_iters + 1):
        value, grad = problem.penalized(point, mu)
        if float(np.linalg.norm(grad)) < INNER_GRAD_SHARE * cfg.grad_tol:
            return point, it - 1, True
        try:
            direction = cho_solve(cho_factor(problem.curvature(point, mu)), grad)
        except np.linalg.LinAlgError:
            direction = grad.copy()
        decrement = float(grad @ direction)
        if not decrement > 0.0:
            direction = grad.copy()
            decrement = float(grad @ grad)

        step = 1.0
        shrinking = direction < 0.0
        if np.any(shrinking):
            step = min(1.0, FRACTION_TO_BOUNDARY * float(np.min(point.theta[shrinking] / -direction[shrinking])))

        accepted = None
        for _ in range(MAX_HALVINGS):
            try:
                candidate = problem.evaluate(point.theta + step * direction)
            except _INFEASIBLE:
                step *= 0.5
                continue
            if problem.penalized(candidate, mu)[0] >= value + ARMIJO * step * decrement:
                accepted = candidate
                break
            step *= 0.5

        if accepted is None:
            logger.debug("line search stalled at mu=%.3g after %d iterations", mu, it)
            return point, it, False
        movement = _relative_move(accepted.theta, point.theta)
        point = accepted
        if movement == 0.0:
            logger.debug("no representable progress at mu=%.3g after %d iterations", mu, it)
            return point, it, False
    return point, cfg.max_inner_iters, False


def _free_grad_norm(point: _Point, boundary: Sequence[str]) -> float:
    free = [j for j, name in enumerate(Params.NAMES) if name not in boundary]
    return float(np.linalg.norm(point.grad[free]))


def _clamp_interactions(problem: _BarrierProblem, point: _Point, threshold: float):
    boundary = []
    for name in Params.INTERACTIONS:
        j = Params.NAMES.index(name)
        if point.theta[j] >= threshold:
            continue
        trial = point.theta.copy()
        trial[j] = 0.0
        try:
            candidate = problem.evaluate(trial)
        except _INFEASIBLE:
            continue
        if candidate.grad[j] < 0.0:
            point = candidate
            boundary.append(name)
    return point, tuple(boundary)


def fit_mle(data: Dataset, cfg: Optional[MleConfig] = None) -> MleResult:
    """Maximum-likelihood estimates under m10, m01, m02 > 0 and m11, m12 >= 0.

    Raises NonIdentifiable for degenerate data and DidNotConverge, carrying
    the partial :class:`MleResult`, when the final projected gradient is not
    below ``cfg.grad_tol``.
    """
    cfg = cfg or MleConfig()
    _check_identifiable(data)
    problem = _BarrierProblem(data, cfg.rel_tol)

    start = moment_start(data) if cfg.warm_start else validate_params(_project(cfg.init))
    point = problem.evaluate(_project(start.as_array()))

    trace: List[TraceEntry] = []
    mu = cfg.barrier_mu0
    for k in range(cfg.outer_iters):
        mu = cfg.barrier_mu0 * cfg.barrier_shrink**k
        previous = point
        point, iters, ok = _inner_loop(problem, point, mu, cfg)
        value, pen_grad = problem.penalized(point, mu)
        movement = _relative_move(point.theta, previous.theta)
        trace.append(TraceEntry(
            round=k, mu=mu, loglik=point.loglik, penalized=value,
            grad_norm=float(np.linalg.norm(pen_grad)), inner_iters=iters,
            movement=movement, inner_ok=ok,
        ))
        logger.debug("barrier round %d: mu=%.3g loglik=%.10g moved %.3g", k, mu, point.loglik, movement)
        if movement < cfg.inner_tol and float(np.linalg.norm(point.grad)) < cfg.grad_tol:
            break

    threshold = max(cfg.clamp_tol, math.sqrt(mu))
    point, boundary = _clamp_interactions(problem, point, threshold)
    grad_norm = _free_grad_norm(point, boundary)
    if grad_norm >= cfg.grad_tol and ok and not boundary:
        # barrier pull mu / theta dominates near an interior optimum close to zero
        logger.debug("polishing without barrier from gradient norm %.3g", grad_norm)
        point, _, _ = _inner_loop(problem, point, 0.0, cfg)
        point, boundary = _clamp_interactions(problem, point, threshold)
        grad_norm = _free_grad_norm(point, boundary)
    estimates = point.params

    result = MleResult(
        estimates=estimates,
        loglik=log_likelihood(estimates, data),
        converged=grad_norm < cfg.grad_tol,
        trace=trace,
        n=data.n,
        grad_norm=grad_norm,
        start=start,
        boundary=boundary,
    )
    if not result.converged:
        raise DidNotConverge(
            f"barrier method stopped with scaled gradient norm {grad_norm:.3g} >= {cfg.grad_tol:g}", result,
        )

    if cfg.compute_std_errors:
        try:
            result.information = observed_information(estimates, data)
            result.std_errors = std_errors(estimates, data, boundary, info=result.information)
        except (BoundaryOptimum, SingularInformation) as e:
            result.std_error_note = str(e)

    logger.info("fit converged: %s, loglik %.10g, boundary %s", estimates, result.loglik, list(boundary) or 'none')
    return result
