"""Reference implementations used only by the tests.

They share no code with the package: sequences are generated from the
definitions with exact rational arithmetic (rho taken from its decimal
string) or 60-digit mpmath for fractional exponents.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath

mpmath.mp.dps = 60


def _ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def exact_lambda(kind: str, lambda0: int, param, k: int) -> int:
    if kind == "plus":
        return lambda0 + k * param
    if kind == "times":
        return _ceil_frac(lambda0 * Fraction(str(param)) ** k)
    if kind == "star":
        lam = lambda0
        for _ in range(k):
            lam = _ceil_frac(lam * Fraction(str(param)))
        return lam
    if kind == "pow":
        if float(param).is_integer():
            return lambda0 * (k + 1) ** int(param)
        return int(mpmath.ceil(lambda0 * mpmath.mpf(k + 1) ** mpmath.mpf(str(param))))
    raise ValueError(kind)


def exact_sequence(kind: str, lambda0: int, param, upto: int) -> list[int]:
    """lambda_0, lambda_1, ... up to the first value >= upto."""
    seq = [lambda0]
    k = 0
    if kind == "star":
        rho = Fraction(str(param))
        while seq[-1] < upto:
            seq.append(_ceil_frac(seq[-1] * rho))
        return seq
    while seq[-1] < upto:
        k += 1
        seq.append(exact_lambda(kind, lambda0, param, k))
    return seq


def brute_loss(kind: str, lambda0: int, param, lambda_hat: int) -> tuple[int, int]:
    """(k_hat, L) straight from the definition: sum of lambda_0..lambda_khat minus lambda_hat."""
    seq = exact_sequence(kind, lambda0, param, lambda_hat)
    k_hat = next(i for i, lam in enumerate(seq) if lam >= lambda_hat)
    return k_hat, sum(seq[: k_hat + 1]) - lambda_hat


def central_diff(f, x: float, h: float) -> float:
    return (f(x + h) - f(x - h)) / (2 * h)


def second_diff(f, x: float, h: float) -> float:
    return (f(x + h) - 2 * f(x) + f(x - h)) / h**2


# the literal chained-type form of the multiplicative upper bound, kept separate from
# the package's shared multiplicative evaluation
def star_upper_literal(lambda_hat: float, lambda0: int, rho: float) -> float:
    return (
        lambda0 * rho
        + math.log(lambda_hat / lambda0) / math.log(rho)
        + (lambda_hat - lambda0) * (rho + 1 / (rho - 1))
    )
