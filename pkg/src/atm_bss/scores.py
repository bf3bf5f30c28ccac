"""Gaussian-kernel score estimates and m-spacing entropy."""
from dataclasses import dataclass

import numpy as np

from .errors import TooFewSamples, ZeroVariance

MIN_SAMPLES = 30
DENSITY_FLOOR = 1e-12
_CHUNK = 1 << 22  # kernel-matrix entries evaluated per block
_SQRT_2PI = np.sqrt(2.0 * np.pi)


def silverman_bandwidth(samples):
    """h = 1.06 * std * n**(-1/5)."""
    samples = np.asarray(samples, dtype=float)
    return 1.06 * samples.std(ddof=1) * samples.size ** (-0.2)


@dataclass(frozen=True, eq=False)
class ChannelKDE:
    samples: np.ndarray
    bandwidth: float
    floor: float = DENSITY_FLOOR

    def _sums(self, u):
        """Return (sum phi(z), sum z*phi(z)) over the kernel centres for each u."""
        u = np.atleast_1d(np.asarray(u, dtype=float))
        h = self.bandwidth
        s0 = np.empty(u.size)
        s1 = np.empty(u.size)
        step = max(1, _CHUNK // self.samples.size)
        for lo in range(0, u.size, step):
            z = (u[lo:lo + step, None] - self.samples[None, :]) / h
            phi = np.exp(-0.5 * z * z)
            s0[lo:lo + step] = phi.sum(axis=1)
            s1[lo:lo + step] = (z * phi).sum(axis=1)
        return s0, s1

    def density(self, u):
        s0, _ = self._sums(u)
        return s0 / (self.samples.size * self.bandwidth * _SQRT_2PI)

    def derivative(self, u):
        _, s1 = self._sums(u)
        return -s1 / (self.samples.size * self.bandwidth ** 2 * _SQRT_2PI)

    def score(self, u):
        """psi(u) = -f'(u) / max(f(u), floor)."""
        s0, s1 = self._sums(u)
        norm = self.samples.size * self.bandwidth * _SQRT_2PI
        f = s0 / norm
        df = -s1 / (norm * self.bandwidth)
        return -df / np.maximum(f, self.floor)


@dataclass(frozen=True, eq=False)
class ScoreModel:
    channels: tuple

    @property
    def bandwidths(self):
        return tuple(c.bandwidth for c in self.channels)


def _fit_channel(samples, floor):
    samples = np.asarray(samples, dtype=float)
    if samples.size < MIN_SAMPLES:
        raise TooFewSamples(f"TooFewSamples: need >= {MIN_SAMPLES} samples, got {samples.size}")
    h = silverman_bandwidth(samples)
    if not h > 0:
        raise ZeroVariance("ZeroVariance: degenerate (constant) channel")
    return ChannelKDE(samples.copy(), float(h), floor)


def fit_score_model(outputs, floor=DENSITY_FLOOR):
    """Fit one Gaussian KDE per output channel with Silverman bandwidths."""
    return ScoreModel((_fit_channel(outputs.ch1, floor), _fit_channel(outputs.ch2, floor)))


def score(model, channel, u):
    """Estimated score of output ``channel`` (1 or 2) at ``u``."""
    value = model.channels[channel - 1].score(u)
    return float(value[0]) if np.ndim(u) == 0 else value


def entropy(samples):
    """Vasicek m-spacing estimate of differential entropy, in nats.

    Uses m = round(sqrt(n)) and clamps order statistics at the sample
    extremes.
    """
    x = np.sort(np.asarray(samples, dtype=float).reshape(-1))
    n = x.size
    if n < MIN_SAMPLES:
        raise TooFewSamples(f"TooFewSamples: need >= {MIN_SAMPLES} samples, got {n}")
    m = int(round(np.sqrt(n)))
    i = np.arange(n)
    upper = x[np.minimum(i + m, n - 1)]
    lower = x[np.maximum(i - m, 0)]
    spacing = np.maximum(upper - lower, np.finfo(float).tiny)
    return float(np.mean(np.log(n / (2.0 * m) * spacing)))
