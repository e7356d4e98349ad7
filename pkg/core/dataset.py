"""Paired count / positive-real observations with cached sufficient statistics."""

import math
from dataclasses import dataclass, field
from typing import Iterable, Tuple

import numpy as np
from scipy.special import gammaln

from .errors import InvalidObservation
from .params import Observation, check_counts, check_positive


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable sample of (x, y) pairs.

    ``suffstats`` is (sum x, sum y, sum x*y, sum log y, sum x*log y), each
    accumulated with ``math.fsum`` so it does not depend on summation order.
    """

    x: np.ndarray
    y: np.ndarray
    suffstats: Tuple[float, float, float, float, float] = field(init=False)
    sum_log_factorial: float = field(init=False)
    sum_log_y: float = field(init=False)

    def __post_init__(self):
        x = np.ascontiguousarray(check_counts(self.x).astype(np.int64))
        y = np.ascontiguousarray(check_positive(self.y))
        if x.ndim != 1 or x.shape != y.shape:
            raise InvalidObservation("x and y must be one-dimensional and of equal length")
        if len(x) == 0:
            raise InvalidObservation("dataset is empty")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, 'x', x)
        object.__setattr__(self, 'y', y)

        xf = x.astype(float)
        log_y = np.log(y)
        stats = (
            math.fsum(xf),
            math.fsum(y),
            math.fsum(xf * y),
            math.fsum(log_y),
            math.fsum(xf * log_y),
        )
        object.__setattr__(self, 'suffstats', stats)
        object.__setattr__(self, 'sum_log_factorial', math.fsum(gammaln(xf + 1.0)))
        object.__setattr__(self, 'sum_log_y', stats[3])

    @property
    def n(self) -> int:
        return int(len(self.x))

    def __len__(self) -> int:
        return self.n

    @property
    def points(self) -> np.ndarray:
        """n x 2 float array of (x, y), the layout the two-sample test uses."""
        return np.column_stack([self.x.astype(float), self.y])

    @classmethod
    def from_arrays(cls, x, y) -> 'Dataset':
        return cls(np.asarray(x), np.asarray(y, dtype=float))

    @classmethod
    def from_observations(cls, observations: Iterable[Observation]) -> 'Dataset':
        obs = list(observations)
        return cls(np.array([o.x for o in obs], dtype=np.int64), np.array([o.y for o in obs], dtype=float))
