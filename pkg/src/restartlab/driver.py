"""Run a restart strategy against a black-box algorithm and count evaluations.

A black box is any callable taking the parameter ``lam`` and returning a
:class:`BlackBoxOutcome`.  The driver calls it at ``lambda_0, lambda_1, ...``
until a run succeeds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .errors import CapExceeded
from .strategy import StrategySpec, iter_lambdas, validate

DEFAULT_K_CAP = 64


@dataclass(frozen=True)
class BlackBoxOutcome:
    success: bool
    evaluations: int

    def __post_init__(self):
        if self.evaluations < 1:
            raise ValueError("a run consumes at least one evaluation")


BlackBox = Callable[[int], BlackBoxOutcome]


@dataclass(frozen=True)
class Run:
    k: int
    lam: int
    evaluations: int
    success: bool


@dataclass
class RestartTrace:
    spec: StrategySpec
    runs: list[Run] = field(default_factory=list)

    @property
    def total_evaluations(self) -> int:
        return sum(r.evaluations for r in self.runs)

    @property
    def succeeded(self) -> bool:
        return bool(self.runs) and self.runs[-1].success

    @property
    def lambdas(self) -> list[int]:
        return [r.lam for r in self.runs]

    def to_dict(self) -> dict:
        return {
            "spec": self.spec.to_dict(),
            "runs": [
                {"k": r.k, "lambda": r.lam, "evaluations": r.evaluations, "success": r.success}
                for r in self.runs
            ],
            "total_evaluations": self.total_evaluations,
            "succeeded": self.succeeded,
        }


class ThresholdOracle:
    """Deterministic black box: succeeds iff ``lam >= lambda_hat``, costs ``lam * g``."""

    def __init__(self, lambda_hat: int, g: int):
        if lambda_hat < 1:
            raise ValueError("lambda_hat must be >= 1")
        if g < 1:
            raise ValueError("g must be >= 1")
        self.lambda_hat = lambda_hat
        self.g = g

    def __call__(self, lam: int) -> BlackBoxOutcome:
        return BlackBoxOutcome(lam >= self.lambda_hat, lam * self.g)

    def __repr__(self) -> str:
        return f"ThresholdOracle(lambda_hat={self.lambda_hat}, g={self.g})"


def threshold_blackbox(lambda_hat: int, g: int) -> ThresholdOracle:
    return ThresholdOracle(lambda_hat, g)


def run_restarts(spec: StrategySpec, blackbox: BlackBox, k_cap: int = DEFAULT_K_CAP) -> RestartTrace:
    """Drive ``blackbox`` through the strategy's sequence until it succeeds.

    Raises:
        CapExceeded: after ``k_cap`` unsuccessful runs; the partial trace is
            attached to the exception.
    """
    validate(spec)
    if k_cap < 1:
        raise ValueError("k_cap must be >= 1")
    trace = RestartTrace(spec)
    lambdas = iter_lambdas(spec)
    for k in range(k_cap):
        lam = next(lambdas)
        out = blackbox(lam)
        trace.runs.append(Run(k, lam, out.evaluations, out.success))
        if out.success:
            return trace
    raise CapExceeded(k_cap, trace)
