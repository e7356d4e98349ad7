"""Parameter vector, observations and the Gamma conditional of the BPGC model."""

import math
from dataclasses import dataclass
from typing import ClassVar, Iterable, Tuple, Union

import numpy as np
from scipy.special import gammainc, gammaln

from .errors import (
    DivergentSeries, InvalidObservation, InvalidParameter, NegativeInteraction,
    NonFiniteParameter, NonPositiveParameter,
)

# Smallest accepted y and largest accepted x.
Y_FLOOR = 1e-300
X_CEILING = 2**31 - 1

ArrayLike = Union[float, int, np.ndarray, Iterable[float]]


@dataclass(frozen=True)
class Params:
    """The five-parameter vector m = (m10, m01, m11, m02, m12).

    Instances are only created through :func:`validate_params`, so every
    ``Params`` in circulation describes a proper distribution.
    """

    m10: float
    m01: float
    m11: float
    m02: float
    m12: float

    NAMES: ClassVar[Tuple[str, ...]] = ('m10', 'm01', 'm11', 'm02', 'm12')
    STRICT: ClassVar[Tuple[str, ...]] = ('m10', 'm01', 'm02')
    INTERACTIONS: ClassVar[Tuple[str, ...]] = ('m11', 'm12')

    def as_array(self) -> np.ndarray:
        return np.array([self.m10, self.m01, self.m11, self.m02, self.m12], dtype=float)

    def as_dict(self) -> dict:
        return {name: float(getattr(self, name)) for name in self.NAMES}

    @property
    def is_independent(self) -> bool:
        return self.m11 == 0.0 and self.m12 == 0.0

    @property
    def is_compound_poisson(self) -> bool:
        return self.m11 == 0.0 and self.m12 == 1.0

    def __str__(self) -> str:
        return '(' + ', '.join(f"{getattr(self, n):.6g}" for n in self.NAMES) + ')'


def validate_params(raw: Iterable[float]) -> Params:
    """Check sign constraints and series convergence, return :class:`Params`.

    Raises the error for the first violated constraint, in parameter order,
    then :class:`DivergentSeries` when the normalizing series would diverge.
    """
    values = [float(v) for v in raw]
    if len(values) != 5:
        raise InvalidParameter('m', f"expected 5 values, got {len(values)}")

    named = dict(zip(Params.NAMES, values))
    for name in Params.NAMES:
        value = named[name]
        if not math.isfinite(value):
            raise NonFiniteParameter(name, value)
        if name in Params.STRICT and value <= 0.0:
            raise NonPositiveParameter(name, value)
        if name in Params.INTERACTIONS and value < 0.0:
            raise NegativeInteraction(name, value)

    m10, m01, m11, m12 = named['m10'], named['m01'], named['m11'], named['m12']
    if m11 == 0.0:
        if m12 > 1.0:
            raise DivergentSeries(f"m11 = 0 requires m12 <= 1 (got m12={m12!r})")
        if m12 == 1.0 and not m10 < math.log(m01):
            raise DivergentSeries(
                f"m11 = 0, m12 = 1 requires m10 < log(m01) (got {m10!r} >= {math.log(m01)!r})"
            )

    return Params(**named)


def is_valid(raw: Iterable[float]) -> bool:
    try:
        validate_params(raw)
    except InvalidParameter:
        return False
    return True


@dataclass(frozen=True)
class Observation:
    """One paired observation: a count ``x`` and a positive real ``y``."""

    x: int
    y: float


def make_observation(x, y) -> Observation:
    return Observation(int(check_counts(x)), float(check_positive(y)))


def check_counts(x, continuous: bool = False) -> np.ndarray:
    """Validate counts (or non-negative reals when ``continuous``)."""
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidObservation("x must be finite")
    if np.any(arr < 0):
        raise InvalidObservation("x must be non-negative")
    if np.any(arr > X_CEILING):
        raise InvalidObservation(f"x must not exceed {X_CEILING}")
    if not continuous and np.any(arr != np.floor(arr)):
        raise InvalidObservation("x must be an integer")
    return arr


def check_positive(y) -> np.ndarray:
    arr = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidObservation("y must be finite")
    if np.any(arr < Y_FLOOR):
        raise InvalidObservation(f"y must be positive (>= {Y_FLOOR})")
    return arr


@dataclass(frozen=True)
class GammaConditional:
    """Distribution of Y given X = x: Gamma with the given shape and rate."""

    shape: float
    rate: float

    @property
    def mean(self) -> float:
        return self.shape / self.rate

    @property
    def variance(self) -> float:
        return self.shape / self.rate**2

    @property
    def mode(self):
        if self.shape <= 1.0:
            return None
        return (self.shape - 1.0) / self.rate

    def logpdf(self, y):
        y = check_positive(y)
        return (
            (self.shape - 1.0) * np.log(y) - self.rate * y
            + self.shape * math.log(self.rate) - gammaln(self.shape)
        )

    def cdf(self, y):
        return gammainc(self.shape, self.rate * np.asarray(y, dtype=float))


def gamma_shape_rate(params: Params, x) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorised shape m02 + m12 x and rate m01 + m11 x."""
    x = np.asarray(x, dtype=float)
    return params.m02 + params.m12 * x, params.m01 + params.m11 * x
