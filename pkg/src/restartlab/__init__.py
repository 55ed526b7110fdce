"""Parameter-dependent restart strategies: exact loss, closed-form bounds, optimal parameters."""

__version__ = "0.1.0"

from .bounds import (
    AsymptoticBound,
    BoundKind,
    BoundSet,
    asymptotic_rel_lower,
    asymptotic_rel_upper,
    bound_set,
    loss_lower,
    loss_upper,
    optimal_nu,
    optimal_rho,
    rel_lower,
    rel_upper,
)
from .driver import BlackBoxOutcome, RestartTrace, run_restarts, threshold_blackbox
from .errors import CapExceeded, DomainError, InvalidParameter, Overflow, RestartLabError, Unsupported
from .loss import LossCurve, LossPoint, full_loss, loss, loss_curve
from .strategy import (
    Kind,
    LambdaSequence,
    StrategySpec,
    lambda_at,
    next_lambda,
    restarts_needed,
    sequence_until,
    validate,
)
from .sweep import (
    SweepReport,
    max_relative_loss,
    minimize_asymptotic_upper,
    sandwich_sweep,
    sawtooth_sweep,
    star_times_nesting,
)
