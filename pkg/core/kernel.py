"""
Discrepancy kernel: indicator, local discrepancy, means, sawtooth, alternants
and the exact identities that tie them together.

Points enter either as ``TorusPoint`` or as tuples of ``SidedValue`` (the
shifted, possibly one-sided, arguments produced inside alternants).
"""

import logging
from fractions import Fraction
from itertools import product
from math import prod
from typing import Callable, List, Sequence, Tuple, Union

from core.scalar import (
    SidedValue,
    Side,
    frac,
    frac_sided,
    frac_with_side,
    sided,
    to_rational,
)
from models.geometry import Anchor, IndexSubset, PointSet, ShiftVector, TorusPoint, check_dims

logger = logging.getLogger("kernel")

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)

PointLike = Union[TorusPoint, Sequence[SidedValue]]
Coordinates = Sequence[Sequence[Fraction]]


def _sided_coords(X: PointLike) -> Tuple[SidedValue, ...]:
    if isinstance(X, TorusPoint):
        return X.sided()
    return tuple(sided(c) for c in X)


def _reduce(x: SidedValue) -> SidedValue:
    return SidedValue(frac(x.value), x.side)


# --- Single-point functions ---

def chi(x, y) -> Fraction:
    """
    One-dimensional indicator: 1 iff {x} < y

    Both arguments may carry side flags; the comparison is lexicographic in
    (value, side), i.e. exact in the common infinitesimal.
    """
    y = sided(y)
    if not 0 <= y.value <= 1:
        raise ValueError(f"chi anchor {y} outside [0, 1]")
    return ONE if frac_with_side(x) < y else ZERO


def volume(Y: Anchor, J: IndexSubset) -> Fraction:
    """Volume v_J(Y) of the projected box; the empty product is 1"""
    return prod((Y[j].value for j in J.positions), start=ONE)


def omega(x) -> Fraction:
    """Centered sawtooth 1/2 - {x}"""
    return HALF - frac_sided(x)


def local_L(X: PointLike, Y: Anchor, J: IndexSubset) -> Fraction:
    """
    Partial local discrepancy L_J(X, Y) = chi_J(X, Y) - v_J(Y)

    Args:
        X: Point, plain or as sided coordinates
        Y: Anchor
        J: Coordinates taking part; the empty subset gives 0

    Returns:
        Exact value
    """
    if not J:
        return ZERO
    coords = _sided_coords(X)
    indicator = prod((chi(coords[j], Y[j]) for j in J.positions), start=ONE)
    return indicator - volume(Y, J)


def mean_lambda(X: PointLike, J: IndexSubset) -> Fraction:
    """Mean of L_J(X, .) over the anchors: prod(1 - {x_j}) - 2**-|J|"""
    if not J:
        return ZERO
    coords = _sided_coords(X)
    return prod((1 - frac_sided(coords[j]) for j in J.positions), start=ONE) - Fraction(1, 2 ** len(J))


def omega_product(X: PointLike, J: IndexSubset) -> Fraction:
    """omega_J(X) = prod of omega over J, with omega of the empty set equal to 0"""
    if not J:
        return ZERO
    coords = _sided_coords(X)
    return prod((omega(coords[j]) for j in J.positions), start=ONE)


# --- Alternants ---

def alternant(f: Callable[[Tuple[SidedValue, ...]], Fraction], X: PointLike, Y: Anchor, J: IndexSubset) -> Fraction:
    """
    Signed sum of f over the 2**|J| vertices X_J - Theta_J * Y_J

    Args:
        f: Function of a tuple of sided coordinates
        X: Base point
        Y: Anchor supplying the steps y_j
        J: Coordinates that are alternated

    Returns:
        sum over Theta in {0,1}^J of (-1)**|Theta| f(X_J - Theta*Y_J, X_J')
    """
    coords = _sided_coords(X)
    total = ZERO
    for mask in product((0, 1), repeat=len(J)):
        shifted = list(coords)
        for theta, j in zip(mask, J.positions):
            if theta:
                shifted[j] = _reduce(coords[j] - Y[j])
        term = f(tuple(shifted))
        total += -term if sum(mask) % 2 else term
    return total


def lambda_alternant(X: PointLike, Y: Anchor, J: IndexSubset) -> Fraction:
    """lambda_J alternant via its product form prod({x_j - y_j} - {x_j})"""
    if not J:
        return ZERO
    coords = _sided_coords(X)
    return prod(
        (frac_sided(coords[j] - Y[j]) - frac_sided(coords[j]) for j in J.positions),
        start=ONE,
    )


def omega_alternant(X: PointLike, Y: Anchor, J: IndexSubset) -> Fraction:
    """omega_J alternant via its product form prod(omega(x_j) - omega(x_j - y_j))"""
    if not J:
        return ZERO
    coords = _sided_coords(X)
    return prod(
        (omega(coords[j]) - omega(coords[j] - Y[j]) for j in J.positions),
        start=ONE,
    )


def chi_decomposition_check(x, y) -> bool:
    """chi(x, y) == y - {x} + {x - y} == y + omega(x) - omega(x - y)"""
    x = to_rational(x)
    y = to_rational(y)
    lhs = chi(x, y)
    via_frac = y - frac(x) + frac(x - y)
    via_omega = y + omega(x) - omega(x - y)
    return lhs == via_frac == via_omega


def lambda_expansion_check(X: PointLike, J: IndexSubset) -> bool:
    """mean_lambda(X, J) == sum over I of J of 2**-|J - I| * omega_I(X)"""
    expansion = sum(
        (Fraction(1, 2 ** (len(J) - len(I))) * omega_product(X, I) for I in J.subsets()),
        start=ZERO,
    )
    return mean_lambda(X, J) == expansion


def main_identity_rhs(X: PointLike, Y: Anchor, generic: bool = True) -> Fraction:
    """
    Right-hand side of the Main Identity for one point

    Sums v_J'(Y) times the lambda_J alternant over every J of [d]. With
    generic=True the alternant is evaluated term by term from mean_lambda;
    otherwise the product form is used.
    """
    total = ZERO
    for J in IndexSubset.all_subsets(Y.dim):
        weight = volume(Y, J.complement())
        if not weight:
            continue
        if generic:
            alt = alternant(lambda P, J=J: mean_lambda(P, J), X, Y, J)
        else:
            alt = lambda_alternant(X, Y, J)
        total += weight * alt
    return total


# --- Point-set level ---

def count_in_box(coords: Coordinates, Y: Sequence[SidedValue]) -> int:
    """Number of points (with multiplicity) strictly inside [0, Y)"""
    return sum(
        1 for point in coords
        if all(SidedValue(x) < y for x, y in zip(point, Y))
    )


def set_L(D: PointSet, Y: Anchor) -> Fraction:
    """Local discrepancy L[D, Y] = A(Y) - N * vol(Y)"""
    check_dims(D.dim, Y)
    return count_in_box(D.coordinates, Y.coords) - D.N * volume(Y, IndexSubset.full(D.dim))


def set_identity_rhs(D: PointSet, Y: Anchor, generic: bool = False) -> Fraction:
    """Main Identity right-hand side summed over the residues of D"""
    check_dims(D.dim, Y)
    total = ZERO
    for J in IndexSubset.all_subsets(D.dim):
        weight = volume(Y, J.complement())
        if not weight:
            continue
        if generic:
            alt = sum((alternant(lambda P, J=J: mean_lambda(P, J), X, Y, J) for X in D), start=ZERO)
        else:
            alt = sum((lambda_alternant(X, Y, J) for X in D), start=ZERO)
        total += weight * alt
    return total


# --- Shifts ---

def carry_indicator(y, z) -> Fraction:
    """delta_{y,z}: 1 iff y + z >= 1"""
    y = to_rational(y)
    z = to_rational(z)
    if not 0 <= y <= 1 or not 0 <= z < 1:
        raise ValueError(f"carry_indicator needs y in [0,1] and z in [0,1), got {y}, {z}")
    return ONE if y + z >= 1 else ZERO


def _vanishes(anchor: SidedValue) -> bool:
    return anchor.value == 0 and anchor.side != Side.RIGHT_LIMIT


def decompose_coordinate(y: SidedValue, z: Fraction) -> List[Tuple[int, SidedValue]]:
    """
    Terms (c, v) with chi(x + z, y) == sum c * chi(x, v) for every x

    The shift is pulled back to w = {-z}; chi(x, 1) is the constant 1.
    Terms with anchor 0 (no right-limit flag) vanish and are dropped.
    """
    w = frac(-z)
    moved = SidedValue(y.value + w, y.side)
    if moved < SidedValue(ONE):
        terms = [(1, moved), (-1, SidedValue(w))]
    else:
        terms = [
            (1, SidedValue(moved.value - 1, moved.side)),
            (-1, SidedValue(w)),
            (1, SidedValue(ONE)),
        ]
    return [(c, v) for c, v in terms if not _vanishes(v)]


def shift_decompose_chi(x, y, z) -> List[Tuple[int, SidedValue]]:
    """
    Expansion of chi(x + z, y) into at most 3 indicators at the unshifted x

    The terms depend on (y, z) only, so the same list serves every x; x is
    validated and otherwise unused.

    Args:
        x: Point coordinate
        y: Anchor coordinate in [0, 1]
        z: Shift in [0, 1)

    Returns:
        List of (coefficient, anchor) pairs
    """
    to_rational(x)
    y = sided(y)
    z = to_rational(z)
    if not 0 <= y.value <= 1 or not 0 <= z < 1:
        raise ValueError(f"shift_decompose_chi needs y in [0,1] and z in [0,1), got {y}, {z}")
    return decompose_coordinate(y, z)


def set_shift_decomposition(D: PointSet, Y: Anchor, Z: ShiftVector) -> List[Tuple[int, Anchor]]:
    """
    Expansion L[D + Z, Y] == sum c_k * L[D, V_k] with at most 3**d terms

    Shift side flags are ignored; the coefficient of each term is the product
    of the per-coordinate coefficients, which also decomposes the volume.
    """
    check_dims(D.dim, Y, Z)
    per_coordinate = [decompose_coordinate(Y[j], Z[j].value) for j in range(D.dim)]
    terms = []
    for choice in product(*per_coordinate):
        coefficient = prod(c for c, _ in choice)
        terms.append((coefficient, Anchor(v for _, v in choice)))
    logger.debug(f"Shift decomposition of {D!r}: {len(terms)} terms")
    return terms


def shifted_point(x: Fraction, z: SidedValue) -> SidedValue:
    """Residue of x + z keeping the shift's side flag"""
    return frac_with_side(SidedValue(x) + z)


def shifted_set_L(D: PointSet, Z: ShiftVector, Y: Anchor) -> Fraction:
    """
    L[D + Z, Y] with sided shifts and anchors read in one common infinitesimal

    Used to re-evaluate witnesses of the periodic searches exactly.
    """
    check_dims(D.dim, Y, Z)
    count = sum(
        1 for point in D.coordinates
        if all(shifted_point(x, z) < y for x, z, y in zip(point, Z, Y))
    )
    return count - D.N * volume(Y, IndexSubset.full(D.dim))


def limit_residues(D: PointSet, Z: ShiftVector) -> Tuple[Tuple[Fraction, ...], ...]:
    """
    Coordinates of the shifted set D + Z as plain rationals in [0, 1]

    A coordinate is 1 when a left-limit shift pushes it up to the seam; all
    anchored-box quantities of the limit configuration are those of these
    coordinates.
    """
    check_dims(D.dim, Z)
    return tuple(
        tuple(shifted_point(x, z).value for x, z in zip(point, Z))
        for point in D.coordinates
    )
