from fractions import Fraction

import pytest
from hypothesis import given, settings

from core.errors import BudgetExceededError
from core.extremal import linf_exact, linf_star_exact
from core.kernel import mean_lambda
from core.lq_norms import (
    CellDecomposition,
    interpolation_check,
    interpolation_check_finite,
    l1_star_exact_1d,
    l2_warnock,
    lq_exact_1d,
    lq_exact_even,
    lq_numeric,
    lq_power_1d,
    lq_shifted_exact,
    lq_star_lower,
    mean_via_cells,
    shift_candidates,
)
from core.scalar import compare_exact, exact, exact_power, to_fraction
from models.config import SearchBudget
from models.geometry import IndexSubset, PointSet, ShiftVector
from models.results import EstimateKind, VerdictStatus
from tests.strategies import point_sets


def test_single_point_exact_values(single_point):
    assert lq_exact_even(single_point, 2) == Fraction(1, 12)
    assert lq_exact_even(single_point, 4) == Fraction(1, 80)
    assert l2_warnock(single_point) == Fraction(1, 12)
    assert lq_exact_1d(single_point, 1) == Fraction(1, 4)
    assert lq_exact_1d(single_point, 2) == Fraction(1, 12)
    assert lq_exact_1d(single_point, 3) == Fraction(1, 32)


def test_cells_cover_the_cube(korobov_5):
    cells = CellDecomposition(korobov_5.coordinates)
    assert cells.size == 25
    assert cells.total_volume() == 1


def test_odd_exponent_is_rejected(korobov_5):
    with pytest.raises(ValueError):
        lq_exact_even(korobov_5, 3)


def test_cell_budget(korobov_5):
    with pytest.raises(BudgetExceededError):
        lq_exact_even(korobov_5, 2, SearchBudget(cells=4))


@settings(max_examples=40, deadline=None)
@given(point_sets(max_dim=3, max_points=5))
def test_warnock_matches_cell_integration(D):
    assert l2_warnock(D) == lq_exact_even(D, 2)


@settings(max_examples=40, deadline=None)
@given(point_sets(max_dim=1, max_points=6))
def test_one_dimensional_formula_matches_cells(D):
    assert lq_exact_1d(D, 2) == lq_exact_even(D, 2)
    assert lq_exact_1d(D, 4) == lq_exact_even(D, 4)


@settings(max_examples=40, deadline=None)
@given(point_sets(max_dim=3, max_points=5))
def test_mean_over_anchors(D):
    full = IndexSubset.full(D.dim)
    assert mean_via_cells(D) == sum(mean_lambda(X, full) for X in D)


def test_monte_carlo_estimate(single_point):
    estimate = lq_numeric(single_point, 2, samples=2000, seed=1)
    assert estimate.kind == EstimateKind.MONTE_CARLO
    assert estimate.value_float == pytest.approx((1 / 12) ** 0.5, abs=0.02)
    assert estimate.stderr is not None and estimate.stderr > 0
    again = lq_numeric(single_point, 2, samples=2000, seed=1)
    assert again.value_float == estimate.value_float


def test_monte_carlo_rejects_bad_arguments(single_point):
    with pytest.raises(ValueError):
        lq_numeric(single_point, 0, samples=10, seed=0)
    with pytest.raises(ValueError):
        lq_numeric(single_point, 2, samples=0, seed=0)


def test_shifted_exact_value(single_point):
    # shifting 1/2 onto 0 gives L(y) = 1 - y for y > 0
    assert lq_shifted_exact(single_point, ShiftVector([Fraction(1, 2)]), 2) == Fraction(1, 3)


def test_shift_candidates_start_with_zero_and_priority(korobov_5):
    priority = [ShiftVector([Fraction(1, 3), Fraction(1, 7)])]
    stream = shift_candidates(korobov_5, priority)
    assert next(stream) == ShiftVector.zeros(2)
    assert next(stream) == priority[0]
    seen = [next(stream) for _ in range(100)]
    assert len(set(seen)) == len(seen)


def test_lq_star_lower_single_point(single_point):
    estimate = lq_star_lower(single_point, 2)
    assert estimate.kind == EstimateKind.LOWER_BOUND
    assert to_fraction(estimate.value_pow_q) == Fraction(1, 3)
    assert estimate.witness_shift is not None


def test_lq_star_lower_respects_shift_budget(single_point):
    estimate = lq_star_lower(single_point, 2, SearchBudget(shift_evaluations=1))
    assert to_fraction(estimate.value_pow_q) == Fraction(1, 12)
    assert estimate.evaluations == 1


@pytest.mark.parametrize("q", ["1", "3/2", "3", "1/2"])
def test_lq_star_lower_is_below_linf_star(korobov_5, q):
    estimate = lq_star_lower(korobov_5, q)
    # every |L| of a configuration is at most the periodic supremum
    bound = exact_power(linf_star_exact(korobov_5).value, Fraction(q))
    assert compare_exact(estimate.value_pow_q, bound) <= 0
    assert compare_exact(estimate.value_pow_q, 0) > 0


@settings(max_examples=25, deadline=None)
@given(point_sets(max_dim=2, max_points=4))
def test_lq_star_lower_dominates_unshifted_even_value(D):
    estimate = lq_star_lower(D, 2, SearchBudget(shift_evaluations=8))
    assert compare_exact(estimate.value_pow_q, lq_exact_even(D, 2)) >= 0


def test_l1_star_in_one_dimension(single_point):
    result = l1_star_exact_1d(single_point)
    assert result.value == Fraction(1, 2)
    assert result.witness_shift == ShiftVector([Fraction(1, 2)])


def test_l1_star_requires_one_dimension(korobov_5):
    with pytest.raises(ValueError):
        l1_star_exact_1d(korobov_5)


def test_interpolation_on_a_single_point(single_point):
    # L_1* = 1/2, L_inf* = 1 and (L_1/2*)^(1/2) = 2/3 with the point at 0
    verdict = interpolation_check(single_point, Fraction(1, 2))
    assert verdict.status == VerdictStatus.HOLDS
    assert verdict.margin == Fraction(1, 6)


def test_interpolation_in_two_dimensions(korobov_5):
    verdict = interpolation_check(korobov_5, Fraction(1, 2))
    assert verdict.status in (VerdictStatus.HOLDS, VerdictStatus.INCONCLUSIVE)


def test_interpolation_rejects_large_q(single_point):
    with pytest.raises(ValueError):
        interpolation_check(single_point, 2)


def test_point_set_with_duplicates():
    D = PointSet(1, [["1/2"], ["1/2"]])
    assert lq_exact_even(D, 2) == 4 * Fraction(1, 12)


def test_fractional_power_in_one_dimension(single_point):
    # 2 * integral of y^(1/2) over [0, 1/2]
    value = lq_power_1d(single_point, Fraction(1, 2))
    assert compare_exact(value, exact_power(2, Fraction(1, 2)) / 3) == 0
    assert to_fraction(lq_power_1d(PointSet(1, [[0]]), Fraction(1, 2))) == Fraction(2, 3)
    assert to_fraction(lq_power_1d(single_point, 3)) == lq_exact_1d(single_point, 3)


@settings(max_examples=25, deadline=None)
@given(point_sets(max_dim=1, max_points=4))
def test_fractional_power_sits_between_its_bounds(D):
    q = Fraction(1, 2)
    value = lq_power_1d(D, q)
    l1 = lq_exact_1d(D, 1)
    # Jensen from above, Hoelder with sup|L| from below
    assert compare_exact(value, exact_power(l1, q)) <= 0
    assert compare_exact(value, exact(l1) * exact_power(linf_exact(D).value, q - 1)) >= 0


def test_fractional_lq_star_is_exact_per_shift_in_one_dimension(single_point):
    estimate = lq_star_lower(single_point, Fraction(1, 2))
    assert to_fraction(estimate.value_pow_q) == Fraction(2, 3)


def test_finite_interpolation_on_a_single_point(single_point):
    # (2/3)^(2/3) * (1/3)^(1/3) = (4/27)^(1/3) > 1/2
    verdict = interpolation_check_finite(single_point, Fraction(1, 2), 2)
    assert verdict.status == VerdictStatus.HOLDS
    assert verdict.key == "interpolation_p@q=1/2,p=2"
    assert 0 < verdict.margin < Fraction(3, 100)
    assert set(verdict.witnesses) == {"linf_star", "lq_star_lower", "lp_star_lower"}


def test_finite_interpolation_approaches_the_limit_form(single_point):
    # the bound falls toward the p = inf form as p grows
    margins = [interpolation_check_finite(single_point, Fraction(1, 2), p).margin for p in (2, 4, 8)]
    assert margins[0] < margins[1] < margins[2] < interpolation_check(single_point, Fraction(1, 2)).margin


def test_finite_interpolation_in_two_dimensions(korobov_5):
    verdict = interpolation_check_finite(korobov_5, Fraction(1, 2), 2)
    assert verdict.status in (VerdictStatus.HOLDS, VerdictStatus.INCONCLUSIVE)


@pytest.mark.parametrize("q, p", [(1, 2), (Fraction(1, 2), 1), (Fraction(3, 2), 2)])
def test_finite_interpolation_rejects_bad_exponents(single_point, q, p):
    with pytest.raises(ValueError):
        interpolation_check_finite(single_point, q, p)


def test_estimates_serialize_numbers(korobov_5):
    data = lq_numeric(korobov_5, 2, 64, 3).to_dict()
    assert type(data["value_float"]) is float
    assert type(data["stderr"]) is float
    assert data["value_pow_q"] is None
    lower = lq_star_lower(korobov_5, Fraction(3, 2)).to_dict()
    assert type(lower["value_float"]) is float
    assert lower["stderr"] is None
    assert isinstance(lower["value_pow_q"], str)
