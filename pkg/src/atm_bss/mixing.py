"""Additive-target nonlinear mixture of two positive sources.

    x1 = s1 + a12 * s2**k
    x2 = s2 + a21 * s1**(1/k)
"""
from dataclasses import dataclass

import numpy as np

from .errors import InvalidDistribution, NonPositiveSample


@dataclass(frozen=True)
class MixingParams:
    a12: float
    a21: float
    k: float

    def __post_init__(self):
        if not (np.isfinite(self.k) and self.k > 0):
            raise ValueError(f"exponent k must be > 0, got {self.k}")
        if not (np.isfinite(self.a12) and np.isfinite(self.a21)):
            raise ValueError("mixing couplings must be finite")


@dataclass(frozen=True, eq=False)
class SignalBatch:
    """N paired samples of a two-channel signal."""

    ch1: np.ndarray
    ch2: np.ndarray
    positivity: bool = False

    def __post_init__(self):
        ch1 = np.asarray(self.ch1, dtype=float).reshape(-1)
        ch2 = np.asarray(self.ch2, dtype=float).reshape(-1)
        if ch1.shape != ch2.shape:
            raise ValueError(f"channel lengths differ: {ch1.size} != {ch2.size}")
        if ch1.size < 1:
            raise ValueError("a batch needs at least one sample")
        if self.positivity and min(ch1.min(), ch2.min()) <= 0:
            raise ValueError("positivity asserted but batch has nonpositive entries")
        object.__setattr__(self, "ch1", ch1)
        object.__setattr__(self, "ch2", ch2)

    @property
    def n(self):
        return self.ch1.size

    def as_array(self):
        return np.column_stack([self.ch1, self.ch2])

    def __eq__(self, other):
        if not isinstance(other, SignalBatch):
            return NotImplemented
        return np.array_equal(self.ch1, other.ch1) and np.array_equal(self.ch2, other.ch2)


def validate_domain(batch, k):
    """Check that fractional powers of both channels are defined.

    When ``k == 1`` the model is linear and no positivity is required;
    otherwise every entry must be strictly positive.

    Raises
    ------
    NonPositiveSample
        Reporting the first offending index and channel.
    """
    if k == 1:
        return batch
    for channel, values in ((1, batch.ch1), (2, batch.ch2)):
        bad = np.flatnonzero(~(values > 0))
        if bad.size:
            i = int(bad[0])
            raise NonPositiveSample(i, channel, float(values[i]))
    return SignalBatch(batch.ch1, batch.ch2, positivity=True)


def mix(sources, params):
    """Apply the forward mixture sample by sample."""
    sources = validate_domain(sources, params.k)
    s1, s2, k = sources.ch1, sources.ch2, params.k
    x1 = s1 + params.a12 * np.power(s2, k)
    x2 = s2 + params.a21 * np.power(s1, 1.0 / k)
    return SignalBatch(x1, x2)


@dataclass(frozen=True)
class SourceSpec:
    """``uniform(lo, hi)`` with 0 < lo < hi, or ``lognormal(mu, sigma)``."""

    distribution: str = "uniform"
    lo: float = 0.1
    hi: float = 1.0
    mu: float = 0.0
    sigma: float = 0.5

    def check(self):
        if self.distribution == "uniform":
            if not (0 < self.lo < self.hi):
                raise InvalidDistribution(
                    f"InvalidDistribution: uniform needs 0 < lo < hi, got ({self.lo}, {self.hi})"
                )
        elif self.distribution == "lognormal":
            if not (self.sigma > 0 and np.isfinite(self.mu)):
                raise InvalidDistribution(
                    f"InvalidDistribution: lognormal needs sigma > 0, got {self.sigma}"
                )
        else:
            raise InvalidDistribution(
                f"InvalidDistribution: unknown distribution {self.distribution!r}"
            )


def generate_sources(n, spec=SourceSpec(), seed=0):
    """Draw two independent i.i.d. positive source channels."""
    if n < 1:
        raise ValueError("n must be >= 1")
    spec.check()
    rng = np.random.default_rng(seed)
    if spec.distribution == "uniform":
        s = rng.uniform(spec.lo, spec.hi, size=(2, n))
    else:
        s = rng.lognormal(spec.mu, spec.sigma, size=(2, n))
    return SignalBatch(s[0], s[1], positivity=True)
