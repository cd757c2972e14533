from __future__ import annotations

import cmath
import math
import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from fibercover.errors import InvalidSpecError, MagnitudeOverflowError, NumericalError
from fibercover.weierstrass import (
    DSchedule,
    WeierstrassProductSpec,
    ZeroRule,
    eval_elementary_factor,
    eval_product,
    log_abs_product,
    log_derivative,
    sin_product_spec,
)


def naive_product(zeros, d, z, origin=False):
    """Direct multiplication of the factors, used only where it cannot overflow."""
    out = z if origin else 1.0
    for w in zeros:
        u = z / w
        out *= (1 - u) * cmath.exp(sum(u ** s / s for s in range(1, d + 1)))
    return out


def test_elementary_factor_values():
    assert eval_elementary_factor(3 + 1j, 0, 17.0) == 1
    assert eval_elementary_factor(1, 1, 0.5) == pytest.approx(math.exp(0.5), rel=1e-15)
    assert eval_elementary_factor(2, 2, 1) == pytest.approx(math.exp(0.625), rel=1e-15)


def test_sin_product_at_half():
    res = eval_product(sin_product_spec(), 0.5)
    assert abs(res.value - 1 / math.pi) < 1e-3
    assert res.certified


def test_zeros_give_exact_zero():
    spec = sin_product_spec(20)
    assert eval_product(spec, 0).value == 0
    assert eval_product(spec, spec.zero(1)).value == 0
    assert log_abs_product(spec, 3.0) == -math.inf


def test_single_zero_log_derivative():
    spec = WeierstrassProductSpec(zeros=(1,), d_schedule=DSchedule.constant(0))
    assert log_derivative(spec, 3) == pytest.approx(0.5)


def test_log_derivative_pole():
    with pytest.raises(NumericalError, match="pole"):
        log_derivative(sin_product_spec(5), 2.0)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.complex_numbers(min_magnitude=0.5, max_magnitude=6, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=6, unique=True),
       st.integers(0, 4),
       st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))
def test_finite_product_matches_naive(zeros, d, z):
    assume(min(abs(z - w) for w in zeros) > 1e-3)
    assume(all(abs(a - b) > 1e-6 for a in zeros for b in zeros if a != b))
    spec = WeierstrassProductSpec(zeros=tuple(zeros), d_schedule=DSchedule.constant(d))
    got = eval_product(spec, z).value
    want = naive_product(zeros, d, z)
    assert abs(got - want) <= 1e-9 * max(1.0, abs(want))


@pytest.mark.parametrize("z", [0.3 + 0.2j, -1.7 + 0.4j, 2.25, 0.1 - 1.3j])
def test_log_derivative_matches_finite_difference(z):
    spec = sin_product_spec(50)
    h = 1e-6
    fd = (cmath.log(eval_product(spec, z + h).value) - cmath.log(eval_product(spec, z - h).value)) / (2 * h)
    got = log_derivative(spec, z)
    assert abs(got - fd) <= 1e-5 * abs(got)


def test_simple_zero_winds_once():
    spec = sin_product_spec(30)
    w = spec.zero(3)
    n = 64
    vals = [eval_product(spec, w + 1e-3 * cmath.exp(2j * math.pi * k / n)).value for k in range(n + 1)]
    total = sum(cmath.phase(b / a) for a, b in zip(vals, vals[1:]))
    assert round(total / (2 * math.pi)) == 1


@pytest.mark.parametrize("z", [0.5, 1.5 + 0.5j, -2.0 + 1j, 3.3j])
def test_bound_decreases_with_truncation(z):
    bounds = [eval_product(sin_product_spec(p), z).error_bound for p in (50, 100, 200, 400, 800)]
    assert all(b < a for a, b in zip(bounds, bounds[1:]))


def test_observed_error_within_ten_times_bound():
    rng = random.Random(8)
    spec = sin_product_spec(200)
    for _ in range(100):
        z = cmath.rect(5 * math.sqrt(rng.random()), rng.uniform(-math.pi, math.pi))
        res = eval_product(spec, z)
        exact = cmath.sin(math.pi * z) / math.pi
        assert res.certified
        assert abs(res.value - exact) <= 10 * res.error_bound * abs(exact) + 1e-12


def test_outside_regime_not_certified():
    res = eval_product(sin_product_spec(5), 4.0 + 0.5j)
    assert not res.certified and res.error_bound == math.inf


def test_index_schedule_handles_far_points_without_overflow():
    spec = WeierstrassProductSpec(zeros=ZeroRule.arithmetic(1, 1), truncation=3000)
    assert math.isfinite(log_abs_product(spec, 40.5))


def test_magnitude_overflow_reported():
    spec = WeierstrassProductSpec(zeros=ZeroRule.arithmetic(1, 1), truncation=400)
    with pytest.raises(MagnitudeOverflowError):
        eval_product(spec, 2000.5)


@pytest.mark.parametrize("kwargs,message", [
    (dict(zeros=ZeroRule.symmetric_integers()), "truncation"),
    (dict(zeros=(1, 1)), "repeated"),
    (dict(zeros=(0, 1), include_zero_at_origin=True), "origin"),
])
def test_product_validation(kwargs, message):
    with pytest.raises(InvalidSpecError, match=message):
        eval_product(WeierstrassProductSpec(**kwargs), 0.5)


def test_rule_hitting_origin_rejected():
    with pytest.raises(InvalidSpecError):
        ZeroRule.arithmetic(-2, 1)
    with pytest.raises(InvalidSpecError):
        ZeroRule.arithmetic(1, 0)
