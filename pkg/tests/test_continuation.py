from __future__ import annotations

import cmath
import math
import random

import pytest

from fibercover.claims import CONFIRMED, COUNTEREXAMPLE, HYPOTHESES_NOT_MET
from fibercover.continuation import (
    CurvePair,
    NumericCurve,
    TriplePoint,
    all_sign_triples,
    check_double_cover_intersection,
    check_quotient_lemma,
    circle_path,
    cross_validate_monodromy,
    double_cover_fibers,
    lift_path,
    numeric_monodromy,
    ordered_roots,
    reverse_path,
    sample_triples,
    winding_number,
    z2z2_action,
)
from fibercover.covers import Permutation, SuperellipticSpec, superelliptic_to_cover
from fibercover.errors import CircleNotIsolatingError, NumericalError
from fibercover.weierstrass import sin_product_spec


def sqrt_curve():
    return NumericCurve.polynomial(2, [0])


def test_constant_path_does_not_move():
    lift = lift_path(sqrt_curve(), [4, 4], 2)
    assert lift.end_value == 2


def test_unit_circle_swaps_square_root_sheets():
    lift = lift_path(sqrt_curve(), circle_path(0, 1.0), 1)
    assert abs(lift.end_value + 1) < 1e-10
    # closed form: sqrt(|z|) exp(i theta / 2) with theta the unwrapped argument
    theta, prev = 0.0, lift.samples[0][1]
    for _, z, w in lift.samples:
        theta += cmath.phase(z / prev)
        prev = z
        assert abs(w - math.sqrt(abs(z)) * cmath.exp(0.5j * theta)) < 1e-8


@pytest.mark.parametrize("sheet", [0, 1])
def test_loop_around_both_zeros_returns(sheet):
    curve = NumericCurve.polynomial(2, [0, 1])
    loop = circle_path(0.5, 2.0)
    start = curve.roots(loop[0])[sheet]
    assert abs(lift_path(curve, loop, start).end_value - start) < 1e-10


def test_start_off_curve_rejected():
    with pytest.raises(NumericalError, match="start not on curve"):
        lift_path(sqrt_curve(), [4, 5], 3)


def test_path_through_branch_point_underflows():
    with pytest.raises(NumericalError, match="step underflow"):
        lift_path(sqrt_curve(), [1, -1], 1)


def test_square_root_monodromy_is_transposition():
    assert numeric_monodromy(sqrt_curve(), 0) == Permutation.cycle(2)


def test_cube_root_monodromy_matches_ordered_construction():
    curve = NumericCurve.polynomial(3, [0])
    assert numeric_monodromy(curve, 0) == superelliptic_to_cover(SuperellipticSpec(3, [0])).monodromy[0]


def test_circle_enclosing_two_points_rejected():
    with pytest.raises(CircleNotIsolatingError, match="circle not isolating"):
        numeric_monodromy(NumericCurve.polynomial(2, [0, 1]), 0, radius=1.5)


def test_ordered_roots_by_argument():
    roots = ordered_roots(-8, 3)
    args = [cmath.phase(r) for r in roots]
    assert args == sorted(args)
    assert all(abs(r ** 3 + 8) < 1e-12 for r in roots)


@pytest.mark.parametrize("q,zeros", [(2, [0, 1, 2, 3]), (3, [0, 2j])])
def test_cross_validation_examples(q, zeros):
    check = cross_validate_monodromy(NumericCurve.polynomial(q, zeros), SuperellipticSpec(q, zeros))
    assert check.verdict == CONFIRMED


def test_perturbed_zero_fails_loudly():
    check = cross_validate_monodromy(NumericCurve.polynomial(2, [0, 1, 2, 3.01]),
                                     SuperellipticSpec(2, [0, 1, 2, 3]))
    assert check.verdict == COUNTEREXAMPLE
    assert len(check.data["mismatches"]) == 2


def test_residuals_stay_below_tolerance():
    rng = random.Random(5)
    zeros = [complex(rng.uniform(-3, 3), rng.uniform(-3, 3)) for _ in range(6)]
    curve = NumericCurve.polynomial(3, zeros)
    path = [complex(rng.uniform(-4, 4), rng.uniform(-4, 4)) for _ in range(5)]
    start = curve.roots(path[0])[1]
    lift = lift_path(curve, path, start)
    assert lift.max_residual <= 1e-10
    assert all(curve.residual(z, w) <= 1e-10 for _, z, w in lift.samples)


def test_homotopic_paths_same_end():
    curve = NumericCurve.polynomial(2, [0, 3])
    upper = [-1 + 0j, -1 + 2j, 1.5 + 2j, 1.5 + 0.2j]
    lower = [-1 + 0j, -0.5 + 0.5j, 1 + 0.3j, 1.5 + 0.2j]
    for p in curve.branch_points:
        assert winding_number(upper + reverse_path(lower)[1:], p) == 0
    start = curve.roots(-1)[0]
    assert abs(lift_path(curve, upper, start).end_value - lift_path(curve, lower, start).end_value) < 1e-8


def test_non_homotopic_paths_differ():
    curve = NumericCurve.polynomial(2, [0])
    upper = [-1 + 0j, 1j, 1 + 0j]
    lower = [-1 + 0j, -1j, 1 + 0j]
    assert winding_number(upper + reverse_path(lower)[1:], 0) != 0
    start = curve.roots(-1)[0]
    a = lift_path(curve, upper, start).end_value
    b = lift_path(curve, lower, start).end_value
    assert abs(a + b) < 1e-8


def test_reversal_returns_start():
    curve = NumericCurve.polynomial(4, [1, -1, 2j])
    path = [0.3 + 0.1j, 2 + 2j, -2 + 1.5j, -0.5 - 1j]
    start = curve.roots(path[0])[2]
    end = lift_path(curve, path, start).end_value
    back = lift_path(curve, reverse_path(path), end).end_value
    assert abs(back - start) < 1e-8


def test_lift_on_weierstrass_curve():
    curve = NumericCurve.from_product(2, sin_product_spec(100))
    loop = circle_path(1.0, 0.3)
    start = curve.roots(loop[0])[0]
    lift = lift_path(curve, loop, start)
    assert abs(lift.end_value + start) < 1e-8


def pair():
    return CurvePair(NumericCurve.polynomial(2, [0, 1, 2]), NumericCurve.polynomial(2, [0, 3]))


def test_involutions_form_klein_group():
    x = all_sign_triples(pair(), 0.7 + 0.4j)[0]
    a1 = z2z2_action(z2z2_action(x, "alpha1"), "alpha1")
    a2 = z2z2_action(z2z2_action(x, "alpha2"), "alpha2")
    assert a1 == x and a2 == x
    assert z2z2_action(z2z2_action(x, "alpha1"), "alpha2") == z2z2_action(z2z2_action(x, "alpha2"), "alpha1")


def test_alpha1_fixes_singular_fiber():
    x = sample_triples(pair(), [3.0], [(1, 1)])[0]
    assert x.z3 == 0
    f1, _ = double_cover_fibers(x)
    assert len(f1) == 1
    assert check_double_cover_intersection(pair(), [x]).verdict == CONFIRMED


def test_quotient_and_intersection_on_random_samples():
    rng = random.Random(11)
    pts = [complex(rng.uniform(-3, 3), rng.uniform(-3, 3)) for _ in range(100)]
    signs = [(rng.choice((1, -1)), rng.choice((1, -1))) for _ in pts]
    samples = sample_triples(pair(), pts, signs)
    q = check_quotient_lemma(pair(), samples)
    assert q.verdict == CONFIRMED and q.data["discrepancy"] == 0
    assert check_double_cover_intersection(pair(), samples).verdict == CONFIRMED


def test_off_curve_samples_rejected():
    bad = [TriplePoint(0.5, 1.0, 1.0)]
    assert check_quotient_lemma(pair(), bad).verdict == HYPOTHESES_NOT_MET
    assert check_double_cover_intersection(pair(), bad).verdict == HYPOTHESES_NOT_MET
