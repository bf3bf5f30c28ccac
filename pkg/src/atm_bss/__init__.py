"""Blind separation of a two-source additive-target nonlinear mixture by
mutual-information minimisation with a recurrent separating structure."""
from .criterion import (
    GradientReport,
    criterion_value,
    fd_oracle_entropy_term,
    fd_oracle_jacobian_term,
    gradient,
)
from .errors import *  # noqa: F401,F403
from .mixing import MixingParams, SignalBatch, SourceSpec, generate_sources, mix, validate_domain
from .optimizer import TrainConfig, TrainTrajectory, evaluate_separation, sir_db, train
from .scores import ScoreModel, entropy, fit_score_model, score
from .separator import (
    FixedPointConfig,
    SensitivityBundle,
    SeparatorCoeffs,
    fixed_point_solve,
    jacobian,
    jacobian_partials,
    jacobian_total_derivatives,
    loop_gain,
    output_sensitivities,
    recurrence_step,
)

__version__ = "0.1.0"
