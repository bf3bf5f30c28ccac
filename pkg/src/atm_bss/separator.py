"""Recurrent separating structure and its analytic derivatives.

The structure inverts the mixture implicitly: its outputs are the fixed
point of

    y1 = x1 - w12 * y2**k
    y2 = x2 - w21 * y1**(1/k)

All functions below accept scalars or equally shaped arrays for ``y1``,
``y2`` and broadcast over samples.
"""
from dataclasses import dataclass

import numpy as np

from .errors import (
    DivergenceDetected,
    NoConvergence,
    NonPositiveIterate,
    SingularJacobian,
)
from .mixing import SignalBatch

SINGULAR_EPS = 1e-12


@dataclass(frozen=True)
class SeparatorCoeffs:
    w12: float
    w21: float
    k: float

    def __post_init__(self):
        if not (np.isfinite(self.k) and self.k > 0):
            raise ValueError(f"exponent k must be > 0, got {self.k}")

    def replace(self, **changes):
        fields = {"w12": self.w12, "w21": self.w21, "k": self.k}
        fields.update(changes)
        return SeparatorCoeffs(**fields)


@dataclass(frozen=True)
class FixedPointConfig:
    tol: float = 1e-12
    max_iter: int = 500
    init: str = "from-observations"

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be > 0")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.init != "from-observations":
            raise ValueError(f"unsupported init {self.init!r}")


@dataclass(frozen=True)
class SensitivityBundle:
    dy1_dw12: np.ndarray
    dy2_dw12: np.ndarray
    dy1_dw21: np.ndarray
    dy2_dw21: np.ndarray


def _check_domain(y1, y2, k):
    if k == 1:
        return
    for channel, v in ((1, y1), (2, y2)):
        v = np.asarray(v)
        bad = np.flatnonzero(~(v > 0))
        if bad.size:
            i = int(bad[0])
            raise NonPositiveIterate(i, channel, float(v.reshape(-1)[i]))


def recurrence_step(y, x, w):
    """One synchronous update of both outputs from iterate ``y``."""
    y1, y2 = (np.asarray(v, dtype=float) for v in y)
    x1, x2 = x
    _check_domain(y1, y2, w.k)
    return x1 - w.w12 * np.power(y2, w.k), x2 - w.w21 * np.power(y1, 1.0 / w.k)


def _residual(y1, y2, x1, x2, w):
    r1 = np.abs(y1 - (x1 - w.w12 * np.power(y2, w.k)))
    r2 = np.abs(y2 - (x2 - w.w21 * np.power(y1, 1.0 / w.k)))
    return np.maximum(r1, r2)


def fixed_point_solve(x, w, cfg=FixedPointConfig()):
    """Run the recurrence to its converged state.

    Parameters
    ----------
    x : pair of floats or arrays, or SignalBatch
        Observations. Each sample is solved independently; samples that
        reach ``cfg.tol`` are frozen while the others keep iterating.
    w : SeparatorCoeffs
    cfg : FixedPointConfig

    Returns
    -------
    y1, y2 : float or ndarray
        Same form as the input (a SignalBatch input gives a SignalBatch).

    Raises
    ------
    NoConvergence, DivergenceDetected, NonPositiveIterate
    """
    as_batch = isinstance(x, SignalBatch)
    if as_batch:
        x1, x2 = x.ch1, x.ch2
    else:
        x1, x2 = x
    scalar = np.ndim(x1) == 0 and np.ndim(x2) == 0
    x1 = np.atleast_1d(np.asarray(x1, dtype=float))
    x2 = np.atleast_1d(np.asarray(x2, dtype=float))

    y1, y2 = x1.copy(), x2.copy()
    _check_domain(y1, y2, w.k)
    res = _residual(y1, y2, x1, x2, w)
    best = res.copy()
    active = res > cfg.tol
    it = 0
    while active.any():
        if it >= cfg.max_iter:
            i = int(np.flatnonzero(active)[0])
            raise NoConvergence(i, float(res[i]), (float(y1[i]), float(y2[i])))
        idx = np.flatnonzero(active)
        n1, n2 = recurrence_step((y1[idx], y2[idx]), (x1[idx], x2[idx]), w)
        try:
            _check_domain(n1, n2, w.k)
        except NonPositiveIterate as exc:
            j = idx[exc.index]
            raise NonPositiveIterate(int(j), exc.channel, exc.value) from None
        y1[idx], y2[idx] = n1, n2
        r = _residual(n1, n2, x1[idx], x2[idx], w)
        res[idx] = r
        blown = ~np.isfinite(r) | (r > 10.0 * best[idx])
        if blown.any():
            j = int(idx[np.flatnonzero(blown)[0]])
            raise DivergenceDetected(j, float(res[j]), float(best[j]))
        best[idx] = np.minimum(best[idx], r)
        active[idx] = r > cfg.tol
        it += 1

    if as_batch:
        return SignalBatch(y1, y2)
    if scalar:
        return float(y1[0]), float(y2[0])
    return y1, y2


def loop_gain(y, w):
    """Product of the two feedback derivatives, g = w12 w21 y1^(1/k-1) y2^(k-1)."""
    y1, y2 = y
    _check_domain(y1, y2, w.k)
    k = w.k
    return w.w12 * w.w21 * np.power(y1, 1.0 / k - 1.0) * np.power(y2, k - 1.0)


def _denominator(y, w):
    d = 1.0 - loop_gain(y, w)
    if np.any(np.abs(d) < SINGULAR_EPS):
        raise SingularJacobian("SingularJacobian: loop gain is 1 (|1 - g| < 1e-12)")
    return d


def jacobian(y, w):
    """Signed Jacobian determinant of the separating map, J = 1/(1 - g)."""
    return 1.0 / _denominator(y, w)


def jacobian_partials(y, w):
    """Partials of J with the outputs held fixed.

    Returns ``(dJ/dw12, dJ/dw21, dJ/dy1, dJ/dy2)``. For ``k == 1`` the two
    output partials are exactly zero.
    """
    y1, y2 = y
    k = w.k
    d2 = _denominator(y, w) ** 2
    p1 = np.power(y1, 1.0 / k - 1.0)
    p2 = np.power(y2, k - 1.0)
    dJ_dw12 = w.w21 * p1 * p2 / d2
    dJ_dw21 = w.w12 * p1 * p2 / d2
    dJ_dy1 = w.w12 * w.w21 * (1.0 / k - 1.0) * np.power(y1, 1.0 / k - 2.0) * p2 / d2
    dJ_dy2 = w.w12 * w.w21 * p1 * (k - 1.0) * np.power(y2, k - 2.0) / d2
    return dJ_dw12, dJ_dw21, dJ_dy1, dJ_dy2


def output_sensitivities(y, w):
    """Total derivatives of the converged outputs in each coefficient.

    Only meaningful at a converged fixed point for the observations that
    produced ``y``.
    """
    y1, y2 = y
    k = w.k
    d = _denominator(y, w)
    y2k = np.power(y2, k)
    y1k = np.power(y1, 1.0 / k)
    return SensitivityBundle(
        dy1_dw12=-y2k / d,
        dy2_dw12=w.w21 * (1.0 / k) * np.power(y1, 1.0 / k - 1.0) * y2k / d,
        dy1_dw21=w.w12 * k * y1k * np.power(y2, k - 1.0) / d,
        dy2_dw21=-y1k / d,
    )


def jacobian_total_derivatives(y, w):
    """dJ/dw12 and dJ/dw21 including the dependence through the outputs.

    dJ/dw = dJ/dw|_y + sum_i dJ/dy_i * dy_i/dw
    """
    dJ_dw12, dJ_dw21, dJ_dy1, dJ_dy2 = jacobian_partials(y, w)
    sens = output_sensitivities(y, w)
    total12 = dJ_dw12 + (dJ_dy1 * sens.dy1_dw12 + dJ_dy2 * sens.dy2_dw12)
    total21 = dJ_dw21 + (dJ_dy1 * sens.dy1_dw21 + dJ_dy2 * sens.dy2_dw21)
    return total12, total21
