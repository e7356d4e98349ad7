"""Gibbs sampler alternating the Poisson and Gamma conditionals."""

import logging
import math
from dataclasses import asdict, dataclass

import numpy as np

from core.dataset import Dataset
from core.errors import InvalidConfig
from core.params import Params

from .rng import UniformStream, gamma_variate, poisson_log_variate

logger = logging.getLogger(__name__)

DEFAULT_SEED = 20240101


@dataclass(frozen=True)
class GibbsConfig:
    """Chain settings. Total iterations are ``burn_in + n * thin``."""

    n: int
    burn_in: int = 1000
    thin: int = 5
    seed: int = DEFAULT_SEED
    init_y: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InvalidConfig(f"n must be an integer >= 1 (got {self.n!r})")
        if int(self.burn_in) != self.burn_in or self.burn_in < 0:
            raise InvalidConfig(f"burn_in must be a non-negative integer (got {self.burn_in!r})")
        if int(self.thin) != self.thin or self.thin < 1:
            raise InvalidConfig(f"thin must be an integer >= 1 (got {self.thin!r})")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidConfig(f"seed must be an unsigned 64-bit integer (got {self.seed!r})")
        if not math.isfinite(self.init_y) or self.init_y <= 0.0:
            raise InvalidConfig(f"init_y must be positive (got {self.init_y!r})")

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """Draws from one generator run, with the settings that produced them."""

    x: np.ndarray
    y: np.ndarray
    generator: str
    config: dict

    @property
    def n(self) -> int:
        return int(len(self.x))

    @property
    def points(self) -> np.ndarray:
        return np.column_stack([self.x.astype(float), self.y])

    def to_dataset(self) -> Dataset:
        return Dataset.from_arrays(self.x, self.y)

    def same_draws(self, other: 'SampleBatch') -> bool:
        return np.array_equal(self.x, other.x) and np.array_equal(self.y, other.y)


def gibbs_sample(params: Params, cfg: GibbsConfig) -> SampleBatch:
    """Run the chain y -> x ~ Poisson(lambda(y)) -> y ~ Gamma(shape(x), rate(x))."""
    stream = UniformStream(cfg.seed)
    xs = np.empty(cfg.n, dtype=np.int64)
    ys = np.empty(cfg.n, dtype=float)

    m10, m01, m11, m02, m12 = params.m10, params.m01, params.m11, params.m02, params.m12
    y = float(cfg.init_y)
    kept = 0
    total = cfg.burn_in + cfg.n * cfg.thin
    for it in range(1, total + 1):
        x = poisson_log_variate(m10 - m11 * y + m12 * math.log(y), stream)
        y = gamma_variate(m02 + m12 * x, m01 + m11 * x, stream)
        if it > cfg.burn_in and (it - cfg.burn_in) % cfg.thin == 0:
            xs[kept] = x
            ys[kept] = y
            kept += 1

    logger.debug("gibbs chain for %s: %d iterations, %d kept", params, total, kept)
    return SampleBatch(x=xs, y=ys, generator='gibbs', config=cfg.as_dict())
