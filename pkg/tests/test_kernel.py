from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from controllers.pointset_controller import sample_anchors
from core.errors import DimensionMismatchError
from core.kernel import (
    alternant,
    carry_indicator,
    chi,
    chi_decomposition_check,
    lambda_alternant,
    lambda_expansion_check,
    local_L,
    main_identity_rhs,
    mean_lambda,
    omega_alternant,
    omega_product,
    set_identity_rhs,
    set_L,
    set_shift_decomposition,
    shift_decompose_chi,
    shifted_set_L,
)
from core.scalar import Side, SidedValue
from generators.sequences import gen_random
from models.geometry import Anchor, IndexSubset, PointSet, ShiftVector, TorusPoint
from tests.strategies import anchors, grid_values, point_sets

HALF = Fraction(1, 2)


def test_chi_values():
    assert chi(Fraction(1, 4), HALF) == 1
    assert chi(HALF, HALF) == 0
    assert chi(HALF, SidedValue(HALF, Side.RIGHT_LIMIT)) == 1
    assert chi(SidedValue(HALF, Side.LEFT_LIMIT), HALF) == 1
    assert chi(Fraction(5, 4), HALF) == 1
    assert chi(0, SidedValue(0, Side.RIGHT_LIMIT)) == 1
    assert chi(Fraction(3, 4), 1) == 1
    assert chi(0, 0) == 0


def test_chi_rejects_anchor_outside_unit_interval():
    with pytest.raises(ValueError):
        chi(0, Fraction(3, 2))


@given(st.fractions(max_denominator=50), st.integers(0, 24).map(lambda k: Fraction(k, 24)))
def test_chi_decomposition(x, y):
    assert chi_decomposition_check(x, y)


def test_local_L_and_mean_of_a_point():
    X = TorusPoint([Fraction(1, 4), Fraction(3, 4)])
    Y = Anchor([HALF, HALF])
    full = IndexSubset.full(2)
    assert local_L(X, Y, full) == -Fraction(1, 4)
    assert local_L(X, Y, IndexSubset(2, [1])) == HALF
    assert local_L(X, Y, IndexSubset.empty(2)) == 0
    assert mean_lambda(X, full) == Fraction(3, 4) * Fraction(1, 4) - Fraction(1, 4)
    assert omega_product(X, IndexSubset.empty(2)) == 0


@settings(max_examples=60, deadline=None)
@given(st.lists(grid_values(), min_size=3, max_size=3))
def test_lambda_expansion(coords):
    X = TorusPoint(coords)
    for J in IndexSubset.all_subsets(3):
        assert lambda_expansion_check(X, J)


@settings(max_examples=60, deadline=None)
@given(st.lists(grid_values(), min_size=2, max_size=2), anchors(2))
def test_product_forms_match_generic_alternants(coords, Y):
    X = TorusPoint(coords)
    for J in IndexSubset.all_subsets(2):
        generic = alternant(lambda P, J=J: mean_lambda(P, J), X, Y, J)
        assert generic == lambda_alternant(X, Y, J)
        generic_omega = alternant(lambda P, J=J: omega_product(P, J), X, Y, J)
        if J:
            assert generic_omega == omega_alternant(X, Y, J)


def test_main_identity_for_two_points():
    D = PointSet(2, [["1/4", "3/4"], ["3/4", "1/4"]])
    Y = Anchor([HALF, HALF])
    assert set_L(D, Y) == -HALF
    assert set_identity_rhs(D, Y) == -HALF
    assert set_identity_rhs(D, Y, generic=True) == -HALF


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_main_identity_exact(data):
    D = data.draw(point_sets(max_dim=3, max_points=5))
    Y = data.draw(anchors(D.dim))
    assert set_identity_rhs(D, Y) == set_L(D, Y)
    assert sum(main_identity_rhs(X, Y) for X in D) == set_L(D, Y)


@pytest.mark.parametrize("dim", [1, 2, 3, 4])
def test_main_identity_on_sampled_anchors(dim):
    D = gen_random(8, dim, 16, seed=dim)
    for Y in sample_anchors(dim, 25, seed=dim):
        assert set_identity_rhs(D, Y) == set_L(D, Y)


def test_identity_at_cube_corners(korobov_5):
    assert set_L(korobov_5, Anchor.zeros(2)) == 0
    assert set_L(korobov_5, Anchor.ones(2)) == 0
    assert set_identity_rhs(korobov_5, Anchor.ones(2)) == 0


def test_set_L_dimension_mismatch(korobov_5):
    with pytest.raises(DimensionMismatchError):
        set_L(korobov_5, Anchor([HALF]))


def test_anchor_validation():
    with pytest.raises(ValueError):
        Anchor([SidedValue(0, Side.LEFT_LIMIT)])
    with pytest.raises(ValueError):
        Anchor([SidedValue(1, Side.RIGHT_LIMIT)])
    with pytest.raises(ValueError):
        Anchor([Fraction(5, 4)])
    parsed = Anchor.parse("1/2,1/3+,3/4-")
    assert parsed.values() == (HALF, Fraction(1, 3), Fraction(3, 4))
    assert [c.side for c in parsed] == [Side.AT, Side.RIGHT_LIMIT, Side.LEFT_LIMIT]


def test_carry_indicator():
    assert carry_indicator(HALF, HALF) == 1
    assert carry_indicator(HALF, Fraction(1, 4)) == 0
    assert carry_indicator(1, 0) == 1
    with pytest.raises(ValueError):
        carry_indicator(HALF, 1)


def test_shift_decomposition_without_carry():
    terms = shift_decompose_chi(Fraction(1, 8), Fraction(1, 4), Fraction(1, 2))
    assert terms == [(1, SidedValue(Fraction(3, 4))), (-1, SidedValue(HALF))]


def test_shift_decomposition_with_carry():
    terms = shift_decompose_chi(0, Fraction(3, 4), Fraction(1, 2))
    assert terms == [(1, SidedValue(Fraction(1, 4))), (-1, SidedValue(HALF)), (1, SidedValue(1))]


@settings(max_examples=60, deadline=None)
@given(grid_values(24), st.integers(0, 24).map(lambda k: Fraction(k, 24)), grid_values(24))
def test_shift_decomposition_pointwise(x, y, z):
    terms = shift_decompose_chi(x, y, z)
    assert len(terms) <= 3
    assert chi(x + z, y) == sum(c * chi(x, v) for c, v in terms)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_set_shift_decomposition(data):
    D = data.draw(point_sets(max_dim=3, max_points=4))
    Y = data.draw(anchors(D.dim))
    Z = ShiftVector(data.draw(st.lists(grid_values(), min_size=D.dim, max_size=D.dim)))
    terms = set_shift_decomposition(D, Y, Z)
    assert len(terms) <= 3 ** D.dim
    assert shifted_set_L(D, Z, Y) == sum(c * set_L(D, V) for c, V in terms)


@settings(max_examples=60, deadline=None)
@given(st.lists(grid_values(), min_size=3, max_size=3), anchors(3))
def test_lambda_and_omega_alternants_agree(coords, Y):
    # {x - y} - {x} and omega(x) - omega(x - y) are the same factor
    X = TorusPoint(coords)
    for J in IndexSubset.all_subsets(3):
        if J:
            assert lambda_alternant(X, Y, J) == omega_alternant(X, Y, J)


@pytest.mark.parametrize("m", [1, 4, 7])
def test_omega_product_integrates_to_zero(m):
    # omega is affine on (0, 1), so the midpoint rule on an m-grid is exact
    midpoints = [Fraction(2 * k + 1, 2 * m) for k in range(m)]
    for J in IndexSubset.all_subsets(2):
        total = sum(omega_product(TorusPoint([a, b]), J) for a in midpoints for b in midpoints)
        assert total == 0


@pytest.mark.parametrize("m", [2, 5])
def test_mean_lambda_integrates_to_zero(m):
    midpoints = [Fraction(2 * k + 1, 2 * m) for k in range(m)]
    full = IndexSubset.full(2)
    assert sum(mean_lambda(TorusPoint([a, b]), full) for a in midpoints for b in midpoints) == 0
