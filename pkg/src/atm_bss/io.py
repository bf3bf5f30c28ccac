"""Flat-file formats: two-channel signal CSV and dotted key=value config."""
import csv
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .errors import InvalidConfig
from .mixing import MixingParams, SignalBatch, SourceSpec
from .separator import FixedPointConfig

SIGNAL_HEADER = ["ch1", "ch2"]


def format_float(v):
    return f"{float(v):.17g}"


def write_signals(path, batch):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SIGNAL_HEADER)
        for a, b in zip(batch.ch1, batch.ch2):
            writer.writerow([format_float(a), format_float(b)])


def read_signals(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != SIGNAL_HEADER:
            raise InvalidConfig(f"{path}: expected header 'ch1,ch2', got {header}")
        rows = [r for r in reader if r]
    try:
        data = np.array([[float(a), float(b)] for a, b in rows], dtype=float)
    except ValueError as exc:
        raise InvalidConfig(f"{path}: malformed row ({exc})") from exc
    if data.size == 0:
        raise InvalidConfig(f"{path}: no samples")
    return SignalBatch(data[:, 0], data[:, 1])


@dataclass
class ExperimentConfig:
    source_distribution: str = "uniform"
    source_lo: float = 0.1
    source_hi: float = 1.0
    source_mu: float = 0.0
    source_sigma: float = 0.5
    source_n: int = 2000
    source_seed: int = 7
    mixing_a12: float = 0.1
    mixing_a21: float = 0.2
    mixing_k: float = 2.0
    solver_tol: float = 1e-12
    solver_max_iter: int = 500
    score_bandwidth_rule: str = "silverman"
    score_epsilon: float = 1e-12
    train_step_size: float = 0.05
    train_max_epochs: int = 500
    train_grad_tol: float = 1e-6
    train_init_w12: float = 0.0
    train_init_w21: float = 0.0
    train_variant: str = "corrected"
    gradcheck_step: float = 1e-6
    gradcheck_jacobian_rtol: float = 1e-4
    gradcheck_entropy_step: float = 1e-4
    gradcheck_entropy_atol: float = 0.1
    gradcheck_entropy_rtol: float = 0.1
    output_dir: str = "."

    def __post_init__(self):
        if self.score_bandwidth_rule != "silverman":
            raise InvalidConfig(f"InvalidConfig: unsupported bandwidth rule {self.score_bandwidth_rule!r}")
        if not self.score_epsilon > 0:
            raise InvalidConfig("InvalidConfig: score.epsilon must be > 0")
        if not self.mixing_k > 0:
            raise InvalidConfig("InvalidConfig: mixing.k must be > 0")
        if not self.solver_tol > 0 or self.solver_max_iter < 1:
            raise InvalidConfig("InvalidConfig: solver.tol must be > 0 and solver.max_iter >= 1")
        if self.source_n < 1:
            raise InvalidConfig("InvalidConfig: source.n must be >= 1")

    @classmethod
    def from_mapping(cls, mapping):
        known = {f.name: f for f in fields(cls)}
        kwargs = {}
        for key, raw in mapping.items():
            name = key.replace(".", "_")
            if "." not in key or name not in known:
                raise InvalidConfig(f"InvalidConfig: unknown key {key!r}")
            kind = type(known[name].default)
            try:
                kwargs[name] = kind(raw) if kind is not int else int(float(raw))
            except ValueError as exc:
                raise InvalidConfig(f"InvalidConfig: bad value for {key!r}: {raw!r}") from exc
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path):
        return cls.from_mapping(parse_config_text(Path(path).read_text()))

    def source_spec(self):
        return SourceSpec(self.source_distribution, self.source_lo, self.source_hi,
                          self.source_mu, self.source_sigma)

    def mixing(self):
        return MixingParams(self.mixing_a12, self.mixing_a21, self.mixing_k)

    def solver(self):
        return FixedPointConfig(tol=self.solver_tol, max_iter=self.solver_max_iter)


def parse_config_text(text):
    """Parse ``dotted.key=value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidConfig(f"InvalidConfig: line {lineno}: expected key=value")
        key, value = (p.strip() for p in line.split("=", 1))
        out[key] = value
    return out
