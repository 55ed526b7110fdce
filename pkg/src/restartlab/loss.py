"""Exact loss of a restart strategy against a known optimal lambda.

The reduced loss is the total lambda spent over all runs up to and including
the first successful one, minus the optimal ``lambda_hat``.  Multiplying by a
constant number of generations ``g`` gives the wasted function evaluations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import DomainError, Overflow
from .strategy import SUM_CAP, StrategySpec, sequence_until, stepper, validate


@dataclass(frozen=True)
class LossPoint:
    lambda_hat: int
    k_hat: int
    loss: int

    @property
    def relative_loss(self) -> float:
        return self.loss / self.lambda_hat


@dataclass(frozen=True, eq=False)
class LossCurve:
    """Loss samples over an ascending range of ``lambda_hat``.

    Stored column-wise as int64 arrays; iterate to get :class:`LossPoint` rows.
    """

    spec: StrategySpec
    lambda_hat: np.ndarray
    k_hat: np.ndarray
    loss: np.ndarray

    @property
    def relative_loss(self) -> np.ndarray:
        return self.loss / self.lambda_hat

    def __len__(self) -> int:
        return len(self.lambda_hat)

    def __getitem__(self, i: int) -> LossPoint:
        return LossPoint(int(self.lambda_hat[i]), int(self.k_hat[i]), int(self.loss[i]))

    def __iter__(self) -> Iterator[LossPoint]:
        for i in range(len(self)):
            yield self[i]

    @property
    def points(self) -> list[LossPoint]:
        return list(self)


def _check_domain(spec: StrategySpec, lambda_hat: int) -> None:
    if lambda_hat < spec.lambda0:
        raise DomainError(f"lambda_hat={lambda_hat} is below lambda0={spec.lambda0}")


def loss(spec: StrategySpec, lambda_hat: int) -> LossPoint:
    """Reduced loss by direct simulation of the restart sequence.

    Accumulates lambda while it is below ``lambda_hat`` and subtracts
    ``lambda_hat`` at the end.
    """
    validate(spec)
    _check_domain(spec, lambda_hat)
    step = stepper(spec)
    lam = spec.lambda0
    fe = lam
    k = 0
    while lam < lambda_hat:
        k += 1
        lam = step(lam, k)
        fe += lam
        if fe > SUM_CAP:
            raise Overflow("accumulated lambda exceeds the 63-bit range")
    return LossPoint(lambda_hat, k, fe - lambda_hat)


def full_loss(spec: StrategySpec, lambda_hat: int, g: int) -> int:
    """Wasted function evaluations ``g * L`` under a constant generation count."""
    if g < 1:
        raise ValueError("g must be >= 1")
    total = g * loss(spec, lambda_hat).loss
    if total > SUM_CAP:
        raise Overflow("g * loss exceeds the 63-bit range")
    return total


def loss_curve(spec: StrategySpec, lo: int, hi: int, stride: int = 1) -> LossCurve:
    """Loss at ``lambda_hat = lo, lo+stride, ...`` up to ``hi`` inclusive.

    The sequence is generated once up to the last sampled ``lambda_hat``;
    each point then reads its prefix sum at ``k_hat``.
    """
    validate(spec)
    if stride < 1:
        raise ValueError("stride must be >= 1")
    if hi < lo:
        raise ValueError("hi must be >= lo")
    _check_domain(spec, lo)

    lambda_hat = np.arange(lo, hi + 1, stride, dtype=np.int64)
    seq = sequence_until(spec, int(lambda_hat[-1])).values
    prefix = []
    total = 0
    for lam in seq:
        total += lam
        if total > SUM_CAP:
            raise Overflow("accumulated lambda exceeds the 63-bit range")
        prefix.append(total)
    seq_arr = np.asarray(seq, dtype=np.int64)
    prefix_arr = np.asarray(prefix, dtype=np.int64)
    # first index with lambda_k >= lambda_hat; correct also when values repeat
    k_hat = np.searchsorted(seq_arr, lambda_hat, side="left").astype(np.int64)
    return LossCurve(spec, lambda_hat, k_hat, prefix_arr[k_hat] - lambda_hat)
