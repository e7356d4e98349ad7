"""Seeded random streams and the scalar Poisson / Gamma variate generators.

All randomness flows through :class:`UniformStream`, which wraps a PCG64
``numpy.random.Generator``. Seeds for replicates are split with
``numpy.random.SeedSequence`` so that replicate ``i`` of seed ``s`` always gets
the same stream, whatever the number of workers.
"""

import math

import numpy as np

from core.errors import InvalidDistributionParameter
from core.params import Y_FLOOR

# Uniforms and normals are drawn from the generator in blocks of this size.
BUFFER_SIZE = 4096

# Below this mean the Poisson generator uses sequential inversion.
POISSON_INVERSION_LIMIT = 10.0

_LOG_Y_FLOOR = math.log(Y_FLOOR)
_LOG_TINY = math.log(np.finfo(float).tiny)
_LOG_HUGE = math.log(np.finfo(float).max)


def derive_seed(seed: int, index: int) -> int:
    """Stable 64-bit child seed for replicate ``index`` of ``seed``."""
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


class UniformStream:
    """Reproducible stream of uniforms in (0, 1) and standard normals."""

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.PCG64(self.seed))
        self._uniforms = np.empty(0)
        self._u_pos = 0
        self._normals = np.empty(0)
        self._n_pos = 0

    def uniform(self) -> float:
        while True:
            if self._u_pos >= len(self._uniforms):
                self._uniforms = self._gen.random(BUFFER_SIZE)
                self._u_pos = 0
            u = float(self._uniforms[self._u_pos])
            self._u_pos += 1
            if u > 0.0:
                return u

    def normal(self) -> float:
        if self._n_pos >= len(self._normals):
            self._normals = self._gen.standard_normal(BUFFER_SIZE)
            self._n_pos = 0
        z = float(self._normals[self._n_pos])
        self._n_pos += 1
        return z

    def uniforms(self, n: int) -> np.ndarray:
        return np.array([self.uniform() for _ in range(n)])

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)


def uniform_stream(seed: int) -> UniformStream:
    return UniformStream(seed)


def _poisson_inversion(mean: float, stream: UniformStream) -> int:
    while True:
        u = stream.uniform()
        x = 0
        p = math.exp(-mean)
        cdf = p
        while u > cdf:
            x += 1
            p *= mean / x
            cdf += p
            if p == 0.0:
                break
        else:
            return x
        # Rounding left cdf short of u; draw again.


def _poisson_ptrs(mean: float, stream: UniformStream) -> int:
    """Transformed rejection with squeeze (Hoermann, 1993)."""
    slam = math.sqrt(mean)
    loglam = math.log(mean)
    b = 0.931 + 2.53 * slam
    a = -0.059 + 0.02483 * b
    invalpha = 1.1239 + 1.1328 / (b - 3.4)
    vr = 0.9277 - 3.6224 / (b - 2.0)

    while True:
        u = stream.uniform() - 0.5
        v = stream.uniform()
        us = 0.5 - abs(u)
        k = math.floor((2.0 * a / us + b) * u + mean + 0.43)
        if us >= 0.07 and v <= vr:
            return int(k)
        if k < 0 or (us < 0.013 and v > us):
            continue
        lhs = math.log(v) + math.log(invalpha) - math.log(a / (us * us) + b)
        if lhs <= -mean + k * loglam - math.lgamma(k + 1.0):
            return int(k)


def poisson_variate(mean: float, stream: UniformStream) -> int:
    """One Poisson(mean) draw: inversion below mean 10, PTRS above."""
    if not math.isfinite(mean) or mean <= 0.0:
        raise InvalidDistributionParameter(f"Poisson mean must be positive and finite (got {mean!r})")
    if mean < POISSON_INVERSION_LIMIT:
        return _poisson_inversion(mean, stream)
    return _poisson_ptrs(mean, stream)


def poisson_log_variate(log_mean: float, stream: UniformStream) -> int:
    """One Poisson(exp(log_mean)) draw. A mean below the smallest normal double gives 0."""
    if math.isnan(log_mean) or log_mean >= _LOG_HUGE:
        raise InvalidDistributionParameter(f"Poisson log-mean must be finite (got {log_mean!r})")
    if log_mean < _LOG_TINY:
        return 0
    return poisson_variate(math.exp(log_mean), stream)


def _log_gamma_unit(shape: float, stream: UniformStream) -> float:
    """log of a Gamma(shape, 1) draw for shape >= 1 (Marsaglia and Tsang)."""
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    while True:
        z = stream.normal()
        v = 1.0 + c * z
        if v <= 0.0:
            continue
        v = v * v * v
        u = stream.uniform()
        if u < 1.0 - 0.0331 * z ** 4:
            return math.log(d) + math.log(v)
        if math.log(u) < 0.5 * z * z + d * (1.0 - v + math.log(v)):
            return math.log(d) + math.log(v)


def gamma_variate(shape: float, rate: float, stream: UniformStream) -> float:
    """One Gamma(shape, rate) draw.

    Shapes below one are boosted: G(shape) = G(shape + 1) * U**(1/shape),
    carried out in log space. Draws that would underflow below the smallest
    admissible y are redrawn.
    """
    if not math.isfinite(shape) or shape <= 0.0:
        raise InvalidDistributionParameter(f"Gamma shape must be positive and finite (got {shape!r})")
    if not math.isfinite(rate) or rate <= 0.0:
        raise InvalidDistributionParameter(f"Gamma rate must be positive and finite (got {rate!r})")

    log_rate = math.log(rate)
    while True:
        if shape >= 1.0:
            log_g = _log_gamma_unit(shape, stream)
        else:
            log_g = _log_gamma_unit(shape + 1.0, stream) + math.log(stream.uniform()) / shape
        log_y = log_g - log_rate
        if log_y >= _LOG_Y_FLOOR:
            return math.exp(log_y)
