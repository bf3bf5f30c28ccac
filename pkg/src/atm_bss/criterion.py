"""Mutual-information criterion and its gradient in the separating coefficients.

The criterion, up to a term that only depends on the observations, is

    C = H(y1) + H(y2) - E[ln|J|]

and its derivative in a coefficient w is

    dC/dw = sum_i E[psi_i(y_i) dy_i/dw] - E[(1/J) dJ/dw].

``dJ/dw`` must be the total derivative (through the outputs as well).
The naive variant substitutes the partial derivative with the outputs held
fixed; it is kept only for comparison.
"""
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import separator as sep
from .errors import TooFewSamples
from .scores import MIN_SAMPLES, entropy, fit_score_model

COEFFS = ("w12", "w21")
FD_CONFIG = sep.FixedPointConfig(tol=1e-12, max_iter=500)


@dataclass
class CoeffGradient:
    entropy_term: float
    jacobian_term: float
    naive_jacobian_term: float

    @property
    def corrected_gradient(self):
        return self.entropy_term - self.jacobian_term

    @property
    def naive_gradient(self):
        return self.entropy_term - self.naive_jacobian_term


@dataclass
class GradientReport:
    w12: CoeffGradient
    w21: CoeffGradient
    mean_log_abs_jacobian: float
    entropies: tuple
    jacobian_sign_flip: bool = False
    extras: dict = field(default_factory=dict)

    def __getitem__(self, coeff):
        return getattr(self, coeff)

    @property
    def criterion(self):
        return sum(self.entropies) - self.mean_log_abs_jacobian

    def corrected(self):
        return np.array([self.w12.corrected_gradient, self.w21.corrected_gradient])

    def naive(self):
        return np.array([self.w12.naive_gradient, self.w21.naive_gradient])

    def to_text(self):
        """Flat ``name=value`` block, one entry per line."""
        lines = []
        for name in COEFFS:
            g = self[name]
            lines += [
                f"{name}.entropy_term={g.entropy_term:.17g}",
                f"{name}.jacobian_term={g.jacobian_term:.17g}",
                f"{name}.corrected_gradient={g.corrected_gradient:.17g}",
                f"{name}.naive_jacobian_term={g.naive_jacobian_term:.17g}",
                f"{name}.naive_gradient={g.naive_gradient:.17g}",
            ]
        lines += [
            f"mean_log_abs_jacobian={self.mean_log_abs_jacobian:.17g}",
            f"entropy_y1={self.entropies[0]:.17g}",
            f"entropy_y2={self.entropies[1]:.17g}",
            f"criterion={self.criterion:.17g}",
            f"jacobian_sign_flip={str(self.jacobian_sign_flip).lower()}",
        ]
        lines += [f"{k}={v:.17g}" if isinstance(v, float) else f"{k}={v}"
                  for k, v in self.extras.items()]
        return "\n".join(lines) + "\n"


def _mean_log_abs_jacobian(y, w):
    J = sep.jacobian((y.ch1, y.ch2), w)
    return float(np.mean(np.log(np.abs(J))))


def criterion_value(outputs, w):
    """Sum of output entropies minus E[ln|J|]; for monitoring only."""
    return entropy(outputs.ch1) + entropy(outputs.ch2) - _mean_log_abs_jacobian(outputs, w)


def _check_sign(J):
    flipped = bool(np.any(J > 0) and np.any(J < 0))
    if flipped:
        warnings.warn(
            "Jacobian changes sign across the batch; outputs likely left the valid domain",
            RuntimeWarning,
            stacklevel=3,
        )
    return flipped


def gradient(x, w, cfg=sep.FixedPointConfig(), floor=None):
    """Corrected and naive gradients of the criterion at ``w``.

    Solves the outputs for every sample, refits the score model on them and
    averages over the batch.
    """
    if x.n < MIN_SAMPLES:
        raise TooFewSamples(f"TooFewSamples: need >= {MIN_SAMPLES} samples, got {x.n}")
    y = sep.fixed_point_solve(x, w, cfg)
    yy = (y.ch1, y.ch2)
    model = fit_score_model(y) if floor is None else fit_score_model(y, floor)
    psi1 = model.channels[0].score(y.ch1)
    psi2 = model.channels[1].score(y.ch2)

    J = sep.jacobian(yy, w)
    flipped = _check_sign(J)
    dJ_dw12, dJ_dw21, _, _ = sep.jacobian_partials(yy, w)
    tot12, tot21 = sep.jacobian_total_derivatives(yy, w)
    s = sep.output_sensitivities(yy, w)

    def coeff(dy1, dy2, total, partial):
        return CoeffGradient(
            entropy_term=float(np.mean(psi1 * dy1) + np.mean(psi2 * dy2)),
            jacobian_term=float(np.mean(total / J)),
            naive_jacobian_term=float(np.mean(partial / J)),
        )

    return GradientReport(
        w12=coeff(s.dy1_dw12, s.dy2_dw12, tot12, dJ_dw12),
        w21=coeff(s.dy1_dw21, s.dy2_dw21, tot21, dJ_dw21),
        mean_log_abs_jacobian=float(np.mean(np.log(np.abs(J)))),
        entropies=(entropy(y.ch1), entropy(y.ch2)),
        jacobian_sign_flip=flipped,
    )


def _perturbed(w, coeff, delta):
    return w.replace(**{coeff: getattr(w, coeff) + delta})


def _central_difference(func, x, w, coeff, step, cfg):
    if not step > 0:
        raise ValueError("step must be > 0")
    lo = sep.fixed_point_solve(x, _perturbed(w, coeff, -step), cfg)
    hi = sep.fixed_point_solve(x, _perturbed(w, coeff, +step), cfg)
    return (func(hi, _perturbed(w, coeff, +step)) - func(lo, _perturbed(w, coeff, -step))) / (2 * step)


def fd_oracle_jacobian_term(x, w, coeff, step=1e-6, cfg=FD_CONFIG):
    """Central difference of mean ln|J(y(w), w)|, re-solving the outputs at w +/- step."""
    return _central_difference(_mean_log_abs_jacobian, x, w, coeff, step, cfg)


def fd_oracle_entropy_term(x, w, coeff, step=1e-4, cfg=FD_CONFIG):
    """Central difference of the summed spacing entropies of the outputs."""
    if x.n < MIN_SAMPLES:
        raise TooFewSamples(f"TooFewSamples: need >= {MIN_SAMPLES} samples, got {x.n}")
    return _central_difference(
        lambda y, _w: entropy(y.ch1) + entropy(y.ch2), x, w, coeff, step, cfg
    )

