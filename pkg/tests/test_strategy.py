import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracle import exact_lambda, exact_sequence
from restartlab import (
    InvalidParameter,
    Kind,
    Overflow,
    StrategySpec,
    lambda_at,
    next_lambda,
    restarts_needed,
    sequence_until,
    validate,
)
from restartlab.strategy import LAMBDA_CAP, exact_ratio

specs = st.one_of(
    st.builds(StrategySpec.plus, st.integers(1, 50), st.integers(1, 30)),
    st.builds(StrategySpec.star, st.integers(1, 50), st.sampled_from([1.05, 1.1, 1.3, 1.5, 2, 2.5, 3, 5])),
    st.builds(StrategySpec.times, st.integers(1, 50), st.sampled_from([1.05, 1.1, 1.3, 1.5, 2, 2.5, 3, 5])),
    st.builds(StrategySpec.pow, st.integers(1, 50), st.sampled_from([1, 1.25, 1.5, 2, 3])),
)


class TestValidate:
    def test_smallest_additive(self):
        spec = StrategySpec(Kind.PLUS, 2, nu=1)
        assert validate(spec) is spec

    def test_rho_boundary(self):
        with pytest.raises(InvalidParameter) as exc:
            validate(StrategySpec(Kind.STAR, 2, rho=1.0))
        assert exc.value.field == "rho"

    def test_pow_fractional_alpha(self):
        assert validate(StrategySpec(Kind.POW, 10, alpha=1.5)).alpha == 1.5

    @pytest.mark.parametrize(
        "spec, field",
        [
            (StrategySpec(Kind.PLUS, 2, nu=0), "nu"),
            (StrategySpec(Kind.PLUS, 2, nu=1.5), "nu"),
            (StrategySpec(Kind.TIMES, 2, rho=0.5), "rho"),
            (StrategySpec(Kind.TIMES, 2, rho=float("inf")), "rho"),
            (StrategySpec(Kind.POW, 2, alpha=0.99), "alpha"),
            (StrategySpec(Kind.POW, 0, alpha=2.0), "lambda0"),
            (StrategySpec(Kind.PLUS, 2, rho=2.0), "nu"),
            (StrategySpec(Kind.STAR, 2, rho=2.0, alpha=2.0), "alpha"),
            (StrategySpec(Kind.STAR, 1, rho=1 + 1e-12), "rho"),
        ],
    )
    def test_rejects(self, spec, field):
        with pytest.raises(InvalidParameter) as exc:
            validate(spec)
        assert exc.value.field == field

    def test_make_unknown_kind(self):
        with pytest.raises(InvalidParameter):
            StrategySpec.make("luby", 2, 2)


class TestNextLambda:
    def test_plus(self):
        assert next_lambda(StrategySpec.plus(2, 5), 2, 1) == 7

    def test_star(self):
        assert next_lambda(StrategySpec.star(2, 1.5), 3, 2) == 5

    def test_times(self):
        assert next_lambda(StrategySpec.times(2, 1.5), 3, 2) == 5

    def test_overflow(self):
        with pytest.raises(Overflow):
            next_lambda(StrategySpec.star(2, 3), 2**61, 1)
        with pytest.raises(Overflow):
            next_lambda(StrategySpec.plus(2, 5), LAMBDA_CAP, 1)


class TestLambdaAt:
    def test_examples(self):
        assert lambda_at(StrategySpec.plus(2, 3), 4) == 14
        assert lambda_at(StrategySpec.star(2, 1.5), 3) == 8
        assert lambda_at(StrategySpec.pow(2, 2), 3) == 32

    def test_k_zero_is_lambda0(self, grid_spec):
        assert lambda_at(grid_spec, 0) == grid_spec.lambda0

    def test_matches_exact_arithmetic(self, grid_spec):
        for k in range(40):
            want = exact_lambda(grid_spec.kind.value, grid_spec.lambda0, grid_spec.param, k)
            if want > LAMBDA_CAP:
                break
            assert lambda_at(grid_spec, k) == want, k

    def test_decimal_products_are_exact(self):
        # 10 * 1.1 is 11.000000000000002 in binary floating point
        assert lambda_at(StrategySpec.times(10, 1.1), 1) == 11
        assert lambda_at(StrategySpec.star(10, 1.1), 2) == 13
        assert exact_ratio(1.1).as_integer_ratio() == (11, 10)

    def test_beyond_float_precision(self):
        assert lambda_at(StrategySpec.times(1, 5), 23) == 5**23
        assert lambda_at(StrategySpec.star(1, 3), 34) == 3**34
        assert lambda_at(StrategySpec.pow(1, 1.5), 2**24 - 1) == 2**36

    def test_fractional_pow_perfect_powers(self):
        spec = StrategySpec.pow(3, 1.5)
        # (k+1)**1.5 is an integer exactly when k+1 is a square
        assert [lambda_at(spec, k) for k in (3, 8, 99)] == [24, 81, 3000]

    def test_overflow_far_out(self):
        with pytest.raises(Overflow):
            lambda_at(StrategySpec.times(2, 2), 70)
        with pytest.raises(Overflow):
            lambda_at(StrategySpec.star(2, 2), 70)
        with pytest.raises(Overflow):
            lambda_at(StrategySpec.times(2, 1.5), 5000)


class TestRestartsNeeded:
    def test_examples(self):
        assert restarts_needed(StrategySpec.plus(2, 1), 2) == 0
        assert restarts_needed(StrategySpec.plus(2, 1), 5) == 3
        assert restarts_needed(StrategySpec.star(2, 2), 5) == 2

    def test_below_lambda0(self):
        assert restarts_needed(StrategySpec.times(10, 2), 3) == 0

    def test_unreachable(self):
        with pytest.raises(Overflow):
            restarts_needed(StrategySpec.times(2, 2), LAMBDA_CAP + 1)

    @given(specs, st.integers(1, 10**6))
    @settings(max_examples=300, deadline=None)
    def test_minimality(self, spec, lambda_hat):
        k = restarts_needed(spec, lambda_hat)
        assert lambda_at(spec, k) >= lambda_hat
        assert k == 0 or lambda_at(spec, k - 1) < lambda_hat

    def test_pow_large_target(self):
        spec = StrategySpec.pow(3, 1.5)
        k = restarts_needed(spec, 10**12)
        assert lambda_at(spec, k) >= 10**12 > lambda_at(spec, k - 1)


class TestSequenceUntil:
    def test_examples(self):
        assert sequence_until(StrategySpec.star(2, 2), 5).values == (2, 4, 8)
        assert sequence_until(StrategySpec.pow(2, 2), 10).values == (2, 8, 18)

    def test_zero_restarts(self, grid_spec):
        assert sequence_until(grid_spec, grid_spec.lambda0).values == (grid_spec.lambda0,)

    @given(specs, st.integers(1, 10**5))
    @settings(max_examples=200, deadline=None)
    def test_shape(self, spec, lambda_hat):
        seq = sequence_until(spec, lambda_hat)
        assert len(seq) == restarts_needed(spec, lambda_hat) + 1
        assert seq[-1] >= lambda_hat
        assert all(v < lambda_hat for v in seq.values[:-1])
        assert list(seq) == exact_sequence(spec.kind.value, spec.lambda0, spec.param, lambda_hat)


@given(specs)
@settings(max_examples=200, deadline=None)
def test_monotone(spec):
    prev = lambda_at(spec, 0)
    for k in range(1, 61):
        try:
            cur = lambda_at(spec, k)
        except Overflow:
            break
        if spec.kind is Kind.TIMES:
            # closed-form ceilings may repeat while lambda0*rho**k*(rho-1) < 1
            assert cur >= prev
            if spec.lambda0 * spec.rho ** (k - 1) * (spec.rho - 1) >= 1:
                assert cur > prev
        else:
            assert cur > prev
        prev = cur


def test_times_repeats_only_below_unit_increment():
    spec = StrategySpec.times(2, 1.1)
    seq = [lambda_at(spec, k) for k in range(12)]
    assert seq == [2, 3, 3, 3, 3, 4, 4, 4, 5, 5, 6, 6]


@given(specs.filter(lambda s: s.kind is Kind.TIMES), st.integers(0, 60))
@settings(max_examples=200, deadline=None)
def test_times_envelope(spec, k):
    try:
        lam = lambda_at(spec, k)
    except Overflow:
        return
    x = spec.lambda0 * exact_ratio(spec.rho) ** k
    assert x <= lam < x + 1


@pytest.mark.parametrize("rho", [1.01, 1.1, 1.3, 1.5, 2, 2.5, 3, 5])
@pytest.mark.parametrize("lambda0", [1, 2, 7, 10])
def test_star_dominates_times(lambda0, rho):
    star, times = StrategySpec.star(lambda0, rho), StrategySpec.times(lambda0, rho)
    for k in range(60):
        try:
            t = lambda_at(times, k)
            s = lambda_at(star, k)
        except Overflow:
            break
        assert s >= t


def test_deterministic(grid_spec):
    a = list(sequence_until(grid_spec, 10**6))
    b = list(sequence_until(grid_spec, 10**6))
    assert a == b
    assert restarts_needed(grid_spec, 9999) == restarts_needed(grid_spec, 9999)


def test_spec_dict_roundtrip():
    spec = StrategySpec.times(2, 2)
    assert spec.to_dict() == {"type": "times", "lambda0": 2, "rho": 2.0}
    assert StrategySpec.make("times", 2, 2) == spec
    assert math.isclose(StrategySpec.make("pow", 3, 1.5).param, 1.5)
