"""Closed-form bounds on the loss and relative loss of each strategy type.

The raw bound functions take ``(lambda_hat, lambda0, param)`` and accept a
scalar or a numpy array for ``lambda_hat``; the parameter may be any real
(``optimal_nu`` and its checks use non-integer ``nu``).  The StrategySpec-level
functions dispatch on a :class:`StrategySpec`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, InvalidParameter, Unsupported
from .strategy import Kind, StrategySpec, validate


def _out(x):
    x = np.asarray(x, dtype=np.float64)
    return float(x) if x.ndim == 0 else x


def _root(x, alpha):
    # alpha-th root as exp(ln(x)/alpha); x == 0 maps to 0
    x = np.asarray(x, dtype=np.float64)
    with np.errstate(divide="ignore"):
        return np.exp(np.log(x) / alpha)


def plus_upper(lambda_hat, lambda0, nu):
    lh = np.asarray(lambda_hat, dtype=np.float64)
    return _out(0.5 * (lh - lambda0 - 1) * ((lh + lambda0 - 1) / nu + 1) + lambda0 + nu - 1)


def plus_lower(lambda_hat, lambda0, nu):
    lh = np.asarray(lambda_hat, dtype=np.float64)
    return _out(0.5 * (lh - lambda0) * ((lh + lambda0) / nu - 1))


def multiplicative_upper(lambda_hat, lambda0, rho):
    """Upper bound shared by the ``star`` and ``times`` types."""
    lh = np.asarray(lambda_hat, dtype=np.float64)
    return _out(
        lh * (rho + 1 / (rho - 1)) - lambda0 / (rho - 1) + np.log(lh / lambda0) / math.log(rho)
    )


def times_lower(lambda_hat, lambda0, rho):
    lh = np.asarray(lambda_hat, dtype=np.float64)
    return _out((lh - 1 - lambda0) / (rho - 1))


def star_lower(lambda_hat, lambda0, rho):
    """Lower bound of the chained type; it also bounds the ``times`` loss."""
    lh = np.asarray(lambda_hat, dtype=np.float64)
    return _out((lh - lambda0 - np.log(lh / lambda0) / math.log(rho) - 1) / (rho - 1))


def pow_upper(lambda_hat, lambda0, alpha):
    lh = np.asarray(lambda_hat, dtype=np.float64)
    r = _root((lh - 1) / lambda0, alpha)
    c = lambda0 / (alpha + 1)
    return _out(c * (r + 2) ** (alpha + 1) + r - c)


def pow_lower(lambda_hat, lambda0, alpha):
    """Zero at ``lambda_hat == lambda0``, the power-sum estimate above it."""
    lh = np.asarray(lambda_hat, dtype=np.float64)
    r = _root((lh - 1) / lambda0, alpha)
    # r >= 1 whenever lambda_hat > lambda0; clip only guards the masked branch
    val = lambda0 / (alpha + 1) * np.clip(r - 1, 0, None) ** (alpha + 1)
    return _out(np.where(lh > lambda0, val, 0.0))


def multiplicative_rel_upper(lambda_hat, lambda0, rho):
    lh = np.asarray(lambda_hat, dtype=np.float64)
    return _out(
        rho
        + 1 / (rho - 1)
        - lambda0 / (lh * (rho - 1))
        + np.log(lh / lambda0) / (lh * math.log(rho))
    )


def multiplicative_asymptotic_upper(rho):
    """``rho + 1/(rho - 1)``: the large-lambda_hat limit of the relative upper bound."""
    return rho + 1 / (rho - 1)


def _check(spec: StrategySpec, lambda_hat) -> Kind:
    validate(spec)
    if np.any(np.asarray(lambda_hat) < spec.lambda0):
        raise DomainError(f"lambda_hat below lambda0={spec.lambda0}")
    return Kind(spec.kind)


def loss_upper(spec: StrategySpec, lambda_hat):
    kind = _check(spec, lambda_hat)
    if kind is Kind.PLUS:
        return plus_upper(lambda_hat, spec.lambda0, spec.nu)
    if kind is Kind.POW:
        return pow_upper(lambda_hat, spec.lambda0, spec.alpha)
    return multiplicative_upper(lambda_hat, spec.lambda0, spec.rho)


def loss_lower(spec: StrategySpec, lambda_hat):
    kind = _check(spec, lambda_hat)
    if kind is Kind.PLUS:
        return plus_lower(lambda_hat, spec.lambda0, spec.nu)
    if kind is Kind.POW:
        return pow_lower(lambda_hat, spec.lambda0, spec.alpha)
    if kind is Kind.TIMES:
        return times_lower(lambda_hat, spec.lambda0, spec.rho)
    return star_lower(lambda_hat, spec.lambda0, spec.rho)


def rel_upper(spec: StrategySpec, lambda_hat):
    """Upper bound on ``L / lambda_hat``; ``None`` for the unbounded types."""
    kind = _check(spec, lambda_hat)
    if kind in (Kind.PLUS, Kind.POW):
        return None
    return multiplicative_rel_upper(lambda_hat, spec.lambda0, spec.rho)


def rel_lower(spec: StrategySpec, lambda_hat):
    lh = np.asarray(lambda_hat, dtype=np.float64)
    return _out(np.asarray(loss_lower(spec, lambda_hat)) / lh)


@dataclass(frozen=True)
class BoundSet:
    lambda_hat: int
    loss_lower: float
    loss_upper: float
    rel_lower: float
    rel_upper: float | None


def bound_set(spec: StrategySpec, lambda_hat: int) -> BoundSet:
    return BoundSet(
        lambda_hat=lambda_hat,
        loss_lower=loss_lower(spec, lambda_hat),
        loss_upper=loss_upper(spec, lambda_hat),
        rel_lower=rel_lower(spec, lambda_hat),
        rel_upper=rel_upper(spec, lambda_hat),
    )


class BoundKind(str, Enum):
    FINITE_UPPER = "finite_upper"
    FINITE_LOWER = "finite_lower"
    INFINITE_LOWER = "infinite_lower"


@dataclass(frozen=True)
class AsymptoticBound:
    kind: BoundKind
    value: float

    @property
    def finite(self) -> bool:
        return self.kind is not BoundKind.INFINITE_LOWER


def _check_rho(rho) -> None:
    if not isinstance(rho, (int, float)) or not math.isfinite(rho) or rho <= 1:
        raise InvalidParameter("rho", "must be a finite real > 1")


def asymptotic_rel_upper(kind: Kind | str, rho: float) -> AsymptoticBound:
    kind = Kind(kind)
    if kind in (Kind.PLUS, Kind.POW):
        raise Unsupported(kind, "strictly unbounded type, no finite asymptotic upper bound")
    _check_rho(rho)
    return AsymptoticBound(BoundKind.FINITE_UPPER, multiplicative_asymptotic_upper(rho))


def asymptotic_rel_lower(kind: Kind | str, param) -> AsymptoticBound:
    kind = Kind(kind)
    if kind is Kind.PLUS:
        if not isinstance(param, int) or isinstance(param, bool) or param < 1:
            raise InvalidParameter("nu", "must be an integer >= 1")
        return AsymptoticBound(BoundKind.INFINITE_LOWER, math.inf)
    if kind is Kind.POW:
        if not isinstance(param, (int, float)) or not math.isfinite(param) or param < 1:
            raise InvalidParameter("alpha", "must be a finite real >= 1")
        return AsymptoticBound(BoundKind.INFINITE_LOWER, math.inf)
    _check_rho(param)
    return AsymptoticBound(BoundKind.FINITE_LOWER, 1 / (param - 1))


def optimal_nu(lambda0: int, lambda_hat: int) -> float:
    """Real-valued ``nu`` minimizing the additive upper bound for a known ``lambda_hat``."""
    radicand = 0.5 * ((lambda_hat - 1) ** 2 - lambda0**2)
    if radicand <= 0:
        raise DomainError(f"need lambda_hat > lambda0 + 1, got lambda0={lambda0}, lambda_hat={lambda_hat}")
    return math.sqrt(radicand)


def optimal_rho() -> tuple[float, float]:
    """Minimizer of ``rho + 1/(rho - 1)`` on ``(1, inf)`` and the minimum value."""
    return 2.0, 3.0
