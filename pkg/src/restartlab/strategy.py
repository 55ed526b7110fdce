"""Restart strategy types and exact generation of their lambda sequences.

Four strategy types are supported:

* ``plus``  -- additive, ``lambda_k = lambda0 + k*nu``
* ``star``  -- chained multiplicative, ``lambda_k = ceil(lambda_{k-1} * rho)``
* ``times`` -- closed-form multiplicative, ``lambda_k = ceil(lambda0 * rho**k)``
* ``pow``   -- power law, ``lambda_k = ceil(lambda0 * (k+1)**alpha)``

Real parameters are read as the exact rational value of their shortest
decimal form, so ``rho = 1.1`` means 11/10 and ``ceil(10 * 1.1)`` is 11, not
the 12 that binary floating point would give.  Ceilings for ``star`` and
``times`` are then exact integer arithmetic; ``pow`` with a non-integer
exponent falls back to 60-digit arithmetic when float64 cannot decide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterator

import mpmath

from .errors import InvalidParameter, Overflow

LAMBDA_CAP = 2**62
SUM_CAP = 2**63 - 1
K_CAP = 2**31 - 1


class Kind(str, Enum):
    PLUS = "plus"
    STAR = "star"
    TIMES = "times"
    POW = "pow"

    def __str__(self) -> str:
        return self.value


_PARAM_OF = {Kind.PLUS: "nu", Kind.STAR: "rho", Kind.TIMES: "rho", Kind.POW: "alpha"}


@dataclass(frozen=True)
class StrategySpec:
    """A strategy type together with its start value and restart parameter.

    Exactly one of ``nu``, ``rho``, ``alpha`` is set, matching ``kind``.
    Use the ``plus``/``star``/``times``/``pow`` constructors, which validate.
    """

    kind: Kind
    lambda0: int
    nu: int | None = None
    rho: float | None = None
    alpha: float | None = None

    @classmethod
    def plus(cls, lambda0: int, nu: int) -> StrategySpec:
        return validate(cls(Kind.PLUS, lambda0, nu=nu))

    @classmethod
    def star(cls, lambda0: int, rho: float) -> StrategySpec:
        return validate(cls(Kind.STAR, lambda0, rho=_real(rho)))

    @classmethod
    def times(cls, lambda0: int, rho: float) -> StrategySpec:
        return validate(cls(Kind.TIMES, lambda0, rho=_real(rho)))

    @classmethod
    def pow(cls, lambda0: int, alpha: float) -> StrategySpec:
        return validate(cls(Kind.POW, lambda0, alpha=_real(alpha)))

    @classmethod
    def make(cls, kind: Kind | str, lambda0: int, param) -> StrategySpec:
        """Build and validate a spec from a kind and its single parameter."""
        try:
            kind = Kind(kind)
        except ValueError:
            raise InvalidParameter("kind", f"unknown strategy type {kind!r}") from None
        if kind is not Kind.PLUS:
            param = _real(param)
        return validate(cls(kind, lambda0, **{_PARAM_OF[kind]: param}))

    @property
    def param_name(self) -> str:
        return _PARAM_OF[Kind(self.kind)]

    @property
    def param(self):
        return getattr(self, self.param_name)

    def to_dict(self) -> dict:
        return {"type": str(self.kind), "lambda0": self.lambda0, self.param_name: self.param}

    def __str__(self) -> str:
        return f"{self.kind}(lambda0={self.lambda0}, {self.param_name}={self.param})"


@dataclass(frozen=True)
class LambdaSequence:
    spec: StrategySpec
    values: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __getitem__(self, k):
        return self.values[k]


def _real(x):
    # ints are accepted for real parameters and stored as floats
    return float(x) if isinstance(x, int) and not isinstance(x, bool) else x


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def validate(spec: StrategySpec) -> StrategySpec:
    """Return ``spec`` unchanged if all parameter constraints hold.

    Raises:
        InvalidParameter: on a bad ``lambda0``, an out-of-range parameter, or a
            parameter that does not belong to ``spec.kind``.
    """
    try:
        kind = Kind(spec.kind)
    except ValueError:
        raise InvalidParameter("kind", f"unknown strategy type {spec.kind!r}") from None
    if not _is_int(spec.lambda0) or spec.lambda0 < 1:
        raise InvalidParameter("lambda0", "must be an integer >= 1")
    if spec.lambda0 > LAMBDA_CAP:
        raise InvalidParameter("lambda0", "exceeds the cap 2**62")

    wanted = _PARAM_OF[kind]
    for name in ("nu", "rho", "alpha"):
        present = getattr(spec, name) is not None
        if name == wanted and not present:
            raise InvalidParameter(name, f"required for type {kind}")
        if name != wanted and present:
            raise InvalidParameter(name, f"not a parameter of type {kind}")

    if kind is Kind.PLUS:
        if not _is_int(spec.nu) or spec.nu < 1:
            raise InvalidParameter("nu", "must be an integer >= 1")
    elif kind in (Kind.STAR, Kind.TIMES):
        rho = spec.rho
        if not isinstance(rho, (int, float)) or not math.isfinite(rho) or rho <= 1:
            raise InvalidParameter("rho", "must be a finite real > 1")
        # a first step within 1e-9 relative of lambda0 is treated as no step
        x = spec.lambda0 * rho
        if exact_ratio(rho) <= 1 or (x - spec.lambda0) <= 1e-9 * max(1.0, x):
            raise InvalidParameter("rho", "too close to 1: first restart does not increase lambda")
    else:
        alpha = spec.alpha
        if not isinstance(alpha, (int, float)) or not math.isfinite(alpha) or alpha < 1:
            raise InvalidParameter("alpha", "must be a finite real >= 1")
    return spec


def exact_ratio(x: float) -> Fraction:
    """The exact rational value of ``x``'s shortest decimal form (1.1 -> 11/10)."""
    return Fraction(repr(float(x)))


def _capped(n: int) -> int:
    if n > LAMBDA_CAP:
        raise Overflow(f"lambda value {n} exceeds the cap 2**62")
    return n


def ceil_ratio(num: int, den: int) -> int:
    """Exact ``ceil(num / den)`` for positive integers, checked against the cap."""
    return _capped(-(-num // den))


def _ceil_real_power(lambda0: int, base: int, alpha: float) -> int:
    """``ceil(lambda0 * base**alpha)`` for non-integer ``alpha``.

    float64 decides whenever the result is clearly away from an integer;
    otherwise the product is recomputed with 60 significant digits and
    values within 1e-40 relative of an integer are taken as that integer.
    """
    try:
        x = lambda0 * float(base) ** alpha
    except OverflowError:
        raise Overflow(f"lambda0 * {base}**alpha overflows") from None
    if not math.isfinite(x) or x > 2 * LAMBDA_CAP:
        raise Overflow(f"lambda value {x!r} exceeds the cap 2**62")
    if x < 2**50 and abs(x - round(x)) > 1e-13 * max(1.0, x):
        return _capped(math.ceil(x))
    with mpmath.workdps(60):
        y = lambda0 * mpmath.power(base, mpmath.mpf(repr(float(alpha))))
        r = mpmath.nint(y)
        n = int(r) if abs(y - r) <= mpmath.mpf("1e-40") * y else int(mpmath.ceil(y))
    return _capped(n)


def _check_k(k: int) -> None:
    if k < 0:
        raise ValueError("restart index k must be >= 0")
    if k > K_CAP:
        raise Overflow(f"restart index {k} exceeds 2**31 - 1")


def _times_at(lambda0: int, ratio: Fraction, k: int) -> int:
    p, q = ratio.numerator, ratio.denominator
    if k * math.log2(p / q) > 64:
        raise Overflow(f"lambda0 * rho**{k} exceeds the cap 2**62")
    return ceil_ratio(lambda0 * p**k, q**k)


def _pow_at(lambda0: int, alpha: float, k: int) -> int:
    if float(alpha).is_integer():
        if int(alpha) * math.log2(k + 1) > 64:
            raise Overflow(f"lambda0 * {k + 1}**alpha exceeds the cap 2**62")
        return _capped(lambda0 * (k + 1) ** int(alpha))
    return _ceil_real_power(lambda0, k + 1, alpha)


def _plus_at(lambda0: int, nu: int, k: int) -> int:
    return _capped(lambda0 + k * nu)


def stepper(spec: StrategySpec) -> Callable[[int, int], int]:
    """Return the update rule ``r(current, k) -> lambda_k`` for ``spec``.

    ``current`` is ``lambda_{k-1}``; ``k`` is the index of the run being started.
    """
    kind = Kind(spec.kind)
    lambda0 = spec.lambda0
    if kind is Kind.PLUS:
        nu = spec.nu

        def step(current: int, k: int) -> int:
            return _capped(current + nu)

    elif kind is Kind.STAR:
        ratio = exact_ratio(spec.rho)
        p, q = ratio.numerator, ratio.denominator

        def step(current: int, k: int) -> int:
            return ceil_ratio(current * p, q)

    elif kind is Kind.TIMES:
        ratio = exact_ratio(spec.rho)

        def step(current: int, k: int) -> int:
            return _times_at(lambda0, ratio, k)

    else:
        alpha = spec.alpha

        def step(current: int, k: int) -> int:
            return _pow_at(lambda0, alpha, k)

    return step


def next_lambda(spec: StrategySpec, current: int, k: int) -> int:
    """Apply the update rule of ``spec`` once.

    For ``plus`` and ``star`` the result depends on ``current`` (= lambda_{k-1});
    for ``times`` and ``pow`` it depends only on ``k``.
    """
    validate(spec)
    _check_k(k)
    return stepper(spec)(current, k)


def lambda_at(spec: StrategySpec, k: int) -> int:
    """Return ``lambda_k``.

    Closed form for ``plus``/``times``/``pow``; chained ceilings for ``star``.
    """
    validate(spec)
    _check_k(k)
    kind = Kind(spec.kind)
    if kind is Kind.PLUS:
        return _plus_at(spec.lambda0, spec.nu, k)
    if kind is Kind.TIMES:
        return _times_at(spec.lambda0, exact_ratio(spec.rho), k)
    if kind is Kind.POW:
        return _pow_at(spec.lambda0, spec.alpha, k)
    step = stepper(spec)
    lam = spec.lambda0
    for i in range(1, k + 1):
        lam = step(lam, i)
    return lam


def iter_lambdas(spec: StrategySpec) -> Iterator[int]:
    """Yield lambda_0, lambda_1, ... until the sequence hits the cap."""
    validate(spec)
    step = stepper(spec)
    lam = spec.lambda0
    k = 0
    yield lam
    while True:
        k += 1
        _check_k(k)
        lam = step(lam, k)
        yield lam


def restarts_needed(spec: StrategySpec, lambda_hat: int) -> int:
    """Minimal ``k`` with ``lambda_k >= lambda_hat``."""
    validate(spec)
    if lambda_hat < 1:
        raise ValueError("lambda_hat must be >= 1")
    if lambda_hat <= spec.lambda0:
        return 0
    if lambda_hat > LAMBDA_CAP:
        raise Overflow(f"lambda_hat {lambda_hat} is beyond the reachable range 2**62")
    kind = Kind(spec.kind)
    if kind is Kind.PLUS:
        return -(-(lambda_hat - spec.lambda0) // spec.nu)
    if kind is Kind.POW:
        # (k+1)**alpha >= lambda_hat/lambda0 gives a starting guess; fix it up exactly
        guess = (lambda_hat / spec.lambda0) ** (1.0 / spec.alpha)
        k = max(0, math.ceil(guess) - 1)
        while k > 0 and _pow_at(spec.lambda0, spec.alpha, k - 1) >= lambda_hat:
            k -= 1
        while _pow_at(spec.lambda0, spec.alpha, k) < lambda_hat:
            k += 1
        return k
    for k, lam in enumerate(iter_lambdas(spec)):
        if lam >= lambda_hat:
            return k
    raise AssertionError("unreachable")


def sequence_until(spec: StrategySpec, lambda_hat: int) -> LambdaSequence:
    """Materialize ``lambda_0 .. lambda_khat`` for the given ``lambda_hat``."""
    validate(spec)
    if lambda_hat < 1:
        raise ValueError("lambda_hat must be >= 1")
    values = []
    for lam in iter_lambdas(spec):
        values.append(lam)
        if lam >= lambda_hat:
            break
    return LambdaSequence(spec, tuple(values))
