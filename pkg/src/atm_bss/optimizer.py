"""Fixed-step gradient descent on the separating coefficients."""
import csv
import io
import logging
from dataclasses import dataclass, field

import numpy as np

from . import separator as sep
from .criterion import gradient
from .errors import DomainError, InvalidConfig, LengthMismatch, NumericalError, ZeroPower
from .scores import DENSITY_FLOOR

log = logging.getLogger(__name__)

VARIANTS = ("corrected", "naive")
MAX_HALVINGS = 5
SIR_CEILING_DB = 120.0
TRAJECTORY_HEADER = ["epoch", "w12", "w21", "C", "grad_norm_corrected", "grad_norm_naive", "stop_reason"]


@dataclass(frozen=True)
class TrainConfig:
    step_size: float = 0.05
    max_epochs: int = 500
    grad_tol: float = 1e-6
    init_w: tuple = (0.0, 0.0)
    variant: str = "corrected"
    k: float = 1.0
    solver: sep.FixedPointConfig = sep.FixedPointConfig()
    density_floor: float = DENSITY_FLOOR

    def __post_init__(self):
        if not self.step_size > 0:
            raise InvalidConfig(f"InvalidConfig: step_size must be > 0, got {self.step_size}")
        if self.max_epochs < 1:
            raise InvalidConfig(f"InvalidConfig: max_epochs must be >= 1, got {self.max_epochs}")
        if not self.grad_tol > 0:
            raise InvalidConfig(f"InvalidConfig: grad_tol must be > 0, got {self.grad_tol}")
        if self.variant not in VARIANTS:
            raise InvalidConfig(f"InvalidConfig: variant must be one of {VARIANTS}")
        if len(self.init_w) != 2:
            raise InvalidConfig("InvalidConfig: init_w must be a pair")


@dataclass
class EpochRecord:
    epoch: int
    w12: float
    w21: float
    criterion: float
    grad_norm_corrected: float
    grad_norm_naive: float
    step_size: float
    stop_reason: str = ""


@dataclass
class TrainTrajectory:
    records: list = field(default_factory=list)
    stop_reason: str = ""
    error: str = ""

    @property
    def final_w(self):
        last = self.records[-1]
        return np.array([last.w12, last.w21])

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRAJECTORY_HEADER)
        for r in self.records:
            writer.writerow([
                r.epoch, f"{r.w12:.17g}", f"{r.w21:.17g}", f"{r.criterion:.17g}",
                f"{r.grad_norm_corrected:.17g}", f"{r.grad_norm_naive:.17g}", r.stop_reason,
            ])
        return buf.getvalue()


def train(x, cfg):
    """Minimise the criterion by w <- w - step * dC/dw.

    Epoch 0 is the initial point. Each record stores the coefficients at
    which the gradient was evaluated; the final record carries the stop
    reason (``converged``, ``max_epochs`` or ``domain_error``). A solver
    failure triggers up to five step halvings before training stops.
    """
    w = np.asarray(cfg.init_w, dtype=float)
    step = cfg.step_size
    traj = TrainTrajectory()

    def evaluate(wv):
        return gradient(x, sep.SeparatorCoeffs(wv[0], wv[1], cfg.k), cfg.solver, cfg.density_floor)

    try:
        report = evaluate(w)
    except NumericalError as exc:
        raise DomainError(f"DomainError: initial point is outside the solvable region ({exc})") from exc

    for epoch in range(cfg.max_epochs + 1):
        g_corr, g_naive = report.corrected(), report.naive()
        rec = EpochRecord(epoch, float(w[0]), float(w[1]), report.criterion,
                          float(np.max(np.abs(g_corr))), float(np.max(np.abs(g_naive))), step)
        traj.records.append(rec)
        g = g_corr if cfg.variant == "corrected" else g_naive
        if np.max(np.abs(g)) <= cfg.grad_tol:
            traj.stop_reason = "converged"
            break
        if epoch == cfg.max_epochs:
            traj.stop_reason = "max_epochs"
            break
        for _ in range(MAX_HALVINGS + 1):
            candidate = w - step * g
            try:
                report = evaluate(candidate)
                break
            except NumericalError as exc:
                log.info("epoch %d: %s; halving step %.3g", epoch, exc, step)
                traj.error = str(exc)
                step *= 0.5
        else:
            traj.stop_reason = "domain_error"
            break
        w = candidate
    traj.records[-1].stop_reason = traj.stop_reason
    return traj


def sir_db(y, s):
    """10 log10(sum s^2 / sum (c y - s)^2) with c the least-squares scale."""
    y = np.asarray(y, dtype=float)
    s = np.asarray(s, dtype=float)
    if y.shape != s.shape:
        raise LengthMismatch(f"LengthMismatch: {y.size} outputs vs {s.size} sources")
    power = np.sum(s * s)
    if power == 0 or np.sum(y * y) == 0:
        raise ZeroPower("ZeroPower: source or output has zero power")
    c = np.dot(y, s) / np.dot(y, y)
    err = np.sum((c * y - s) ** 2)
    if err == 0:
        return SIR_CEILING_DB
    return float(min(10.0 * np.log10(power / err), SIR_CEILING_DB))


def evaluate_separation(y, s):
    """Per-channel SIR (dB) and the output-by-source correlation matrix."""
    if y.n != s.n:
        raise LengthMismatch(f"LengthMismatch: {y.n} outputs vs {s.n} sources")
    sir = (sir_db(y.ch1, s.ch1), sir_db(y.ch2, s.ch2))
    corr = np.corrcoef(np.vstack([y.ch1, y.ch2, s.ch1, s.ch2]))[:2, 2:]
    return {"sir_db": sir, "correlation": corr}
