"""
Exact extremal searches.

Every supremum below is a maximum over a finite candidate set: the local
discrepancy is piecewise polynomial in the anchor (or shift) with pieces cut
at the point coordinates, so extremes sit at piece corners, possibly as
one-sided limits. Enumeration order is lexicographic over the candidate grid
and the first strict maximizer wins, which makes witnesses deterministic.
"""

import logging
from enum import Enum
from fractions import Fraction
from itertools import product
from math import prod
from typing import List, Optional, Sequence, Tuple

from core.errors import BudgetExceededError, DimensionMismatchError
from core.kernel import ONE, ZERO, shifted_point, shifted_set_L, set_L
from core.scalar import SidedValue, Side, frac, frac_sided
from models.config import SearchBudget
from models.geometry import Anchor, IndexSubset, PointSet, ShiftVector, check_dims
from models.results import ExtremalResult

logger = logging.getLogger("extremal_search")


class LambdaMode(str, Enum):
    """Objective of lambda_star: |lambda| or the signed value"""
    ABS = "abs"
    PLAIN = "plain"


def _check_budget(operation: str, required: int, allowed: int) -> None:
    logger.debug(f"{operation}: {required} candidates (budget {allowed})")
    if required > allowed:
        raise BudgetExceededError(operation, required, allowed)


def _check_dim(operation: str, D: PointSet, budget: SearchBudget) -> None:
    if D.dim > budget.max_dim:
        raise BudgetExceededError(f"{operation} (dimension)", D.dim, budget.max_dim)


def _masks(column: Sequence[Fraction], keep) -> int:
    """Bitmask of the point indexes i with keep(column[i])"""
    mask = 0
    for i, x in enumerate(column):
        if keep(x):
            mask |= 1 << i
    return mask


# --- Anchored boxes ---

def candidate_anchors(D: PointSet) -> List[List[Fraction]]:
    """Per-coordinate grid Gamma_j: distinct coordinates of D together with 1"""
    return [sorted(set(D.column(j)) | {ONE}) for j in range(D.dim)]


def linf_exact(D: PointSet, budget: Optional[SearchBudget] = None) -> ExtremalResult:
    """
    Exact sup over anchors Y of |L[D, Y]|

    The positive part is maximized at right limits of grid corners (boxes that
    just swallow the points on their upper faces), the negative part at the
    grid corners themselves.

    Args:
        D: Point set
        budget: Enumeration caps

    Returns:
        ExtremalResult with witness_anchor; attained is False when only a
        one-sided limit reaches the supremum
    """
    budget = budget or SearchBudget()
    _check_dim("linf_exact", D, budget)
    grid = candidate_anchors(D)
    size = prod(len(g) for g in grid)
    _check_budget("linf_exact", size, budget.linf_candidates)

    columns = [D.column(j) for j in range(D.dim)]
    closed = [[_masks(col, lambda x, g=g: x <= g) for g in gs] for col, gs in zip(columns, grid)]
    open_ = [[_masks(col, lambda x, g=g: x < g) for g in gs] for col, gs in zip(columns, grid)]
    everyone = (1 << D.N) - 1

    best: Optional[Fraction] = None
    best_anchor: Optional[Anchor] = None
    for idx in product(*(range(len(g)) for g in grid)):
        corner = [grid[j][k] for j, k in enumerate(idx)]
        vol = prod(corner, start=ONE)
        inside = everyone
        for j, k in enumerate(idx):
            inside &= closed[j][k]
        value = inside.bit_count() - D.N * vol
        if best is None or value > best:
            best = value
            best_anchor = Anchor(
                SidedValue(g, Side.AT if g == 1 else Side.RIGHT_LIMIT) for g in corner
            )
        inside = everyone
        for j, k in enumerate(idx):
            inside &= open_[j][k]
        value = D.N * vol - inside.bit_count()
        if value > best:
            best = value
            best_anchor = Anchor(corner)

    attained = abs(set_L(D, best_anchor.at())) == best
    if attained:
        best_anchor = best_anchor.at()
    logger.debug(f"linf_exact {D!r}: {best} at {best_anchor!r}")
    return ExtremalResult("linf", best, witness_anchor=best_anchor, attained=attained, evaluations=2 * size)


# --- Shifted means ---

def shift_breakpoints(D: PointSet, J: IndexSubset) -> List[List[Fraction]]:
    """Per j in J, the shifts where some x_j + z crosses an integer, plus 0"""
    return [sorted({frac(-x) for x in D.column(j)} | {ZERO}) for j in J.positions]


def lambda_shifted(D: PointSet, Z: ShiftVector, J: IndexSubset) -> Fraction:
    """lambda_J[D + Z] = sum over X of prod_{j in J}(1 - {x_j + z_j}) - N * 2**-|J|"""
    check_dims(D.dim, Z)
    if not J:
        return ZERO
    total = sum(
        (prod((1 - frac_sided(shifted_point(point[j], Z[j])) for j in J.positions), start=ONE)
         for point in D.coordinates),
        start=ZERO,
    )
    return total - D.N * Fraction(1, 2 ** len(J))


def lambda_star(
    D: PointSet,
    J: IndexSubset,
    mode: LambdaMode = LambdaMode.ABS,
    budget: Optional[SearchBudget] = None,
) -> ExtremalResult:
    """
    Exact sup over shifts of |lambda_J[D + Z]| (or of lambda_J itself in PLAIN mode)

    lambda_J[D + Z] is affine in each z_j between breakpoints, so the supremum
    is reached at a breakpoint, either at it or as the limit from the left.
    """
    budget = budget or SearchBudget()
    if J.dim != D.dim:
        raise DimensionMismatchError(D.dim, J.dim)
    if not J:
        return ExtremalResult(f"lambda_star{J}", ZERO, witness_shift=ShiftVector.zeros(D.dim))
    _check_dim("lambda_star", D, budget)
    breakpoints = shift_breakpoints(D, J)
    size = prod(2 * len(b) for b in breakpoints)
    _check_budget("lambda_star", size, budget.lambda_star_candidates)

    # per coordinate and vertex, the factors (1 - {x_ij + z}) of every point
    vertices: List[List[Tuple[SidedValue, Tuple[Fraction, ...]]]] = []
    for j, bs in zip(J.positions, breakpoints):
        column = D.column(j)
        options = []
        for b in bs:
            for z in (SidedValue(b), SidedValue(b, Side.LEFT_LIMIT)):
                factors = tuple(1 - frac_sided(shifted_point(x, z)) for x in column)
                options.append((z, factors))
        vertices.append(options)

    mean = D.N * Fraction(1, 2 ** len(J))
    best = best_objective = None
    best_choice = None
    for choice in product(*vertices):
        value = sum(
            (prod((factors[i] for _, factors in choice), start=ONE) for i in range(D.N)),
            start=ZERO,
        ) - mean
        objective = abs(value) if mode == LambdaMode.ABS else value
        if best_objective is None or objective > best_objective:
            best, best_objective, best_choice = value, objective, choice

    coords = [SidedValue(ZERO)] * D.dim
    for j, (z, _) in zip(J.positions, best_choice):
        coords[j] = z
    witness = ShiftVector(coords)
    attained = lambda_shifted(D, witness.at(), J) == best
    if attained:
        witness = witness.at()
    return ExtremalResult(
        f"lambda_star{J}",
        best_objective,
        witness_shift=witness,
        attained=attained,
        evaluations=size,
    )


def complete_shift(
    D: PointSet,
    Z: ShiftVector,
    J: IndexSubset,
    budget: Optional[SearchBudget] = None,
) -> Tuple[ShiftVector, Fraction]:
    """
    Keep Z on J and choose the other coordinates to maximize |lambda[D + Z]|

    Averaging lambda[D + Z] over the coordinates outside J gives
    2**-(d - |J|) * lambda_J[D + Z], so the returned maximum is at least that
    large in absolute value.

    Returns:
        (completed shift, |lambda over all coordinates| at it)
    """
    budget = budget or SearchBudget()
    full = IndexSubset.full(D.dim)
    rest = J.complement()
    breakpoints = shift_breakpoints(D, rest)
    size = prod(2 * len(b) for b in breakpoints)
    _check_budget("complete_shift", size, budget.lambda_star_candidates)

    options = [[SidedValue(b, side) for b in bs for side in (Side.AT, Side.LEFT_LIMIT)] for bs in breakpoints]
    best = best_shift = None
    for choice in product(*options):
        coords = list(Z)
        for j, z in zip(rest.positions, choice):
            coords[j] = z
        shift = ShiftVector(coords)
        value = abs(lambda_shifted(D, shift, full))
        if best is None or value > best:
            best, best_shift = value, shift
    return best_shift, best


# --- Periodic boxes ---

def _arc_candidates(column: Sequence[Fraction]):
    """
    Closed and open arcs between distinct coordinates of one column

    Yields, for the positive and the negative part, tuples
    (shift, anchor, membership mask, length).
    """
    starts = sorted(set(column))
    positive, negative = [], []
    for p in starts:
        for q in starts:
            length = frac(q - p)
            mask = _masks(column, lambda x: frac(x - p) <= length)
            positive.append((SidedValue(frac(-p)), SidedValue(length, Side.RIGHT_LIMIT), mask, length))
            span = length if q != p else ONE
            mask = _masks(column, lambda x: ZERO < frac(x - p) < span)
            negative.append((SidedValue(frac(-p), Side.LEFT_LIMIT), SidedValue(span, Side.LEFT_LIMIT), mask, span))
    negative.append((SidedValue(ZERO), SidedValue(ONE), (1 << len(column)) - 1, ONE))
    return positive, negative


def linf_star_exact(D: PointSet, budget: Optional[SearchBudget] = None) -> ExtremalResult:
    """
    Exact sup over shifts Z and anchors Y of |L[D + Z, Y]|

    Shifted anchored boxes are exactly the periodic (wrap-around) boxes. The
    count of a box only changes where a face crosses a point, so the positive
    part is maximized on closed arcs between point coordinates and the
    negative part on open arcs (or the full circle).

    Returns:
        ExtremalResult with witness_shift and witness_anchor; the pair
        reproduces the value through shifted_set_L
    """
    budget = budget or SearchBudget()
    _check_dim("linf_star_exact", D, budget)
    arcs = [_arc_candidates(D.column(j)) for j in range(D.dim)]
    size = prod(len(pos) for pos, _ in arcs) + prod(len(neg) for _, neg in arcs)
    _check_budget("linf_star_exact", size, budget.linf_star_candidates)

    everyone = (1 << D.N) - 1
    best = None
    best_choice = None
    for part in (0, 1):
        for choice in product(*(a[part] for a in arcs)):
            inside = everyone
            for _, _, mask, _ in choice:
                inside &= mask
            vol = prod((c[3] for c in choice), start=ONE)
            if part == 0:
                value = inside.bit_count() - D.N * vol
            else:
                value = D.N * vol - inside.bit_count()
            if best is None or value > best:
                best, best_choice = value, choice

    shift = ShiftVector(c[0] for c in best_choice)
    anchor = Anchor(c[1] for c in best_choice)
    attained = abs(shifted_set_L(D, shift.at(), anchor.at())) == best
    if attained:
        shift, anchor = shift.at(), anchor.at()
    logger.debug(f"linf_star_exact {D!r}: {best} over {size} candidates")
    return ExtremalResult(
        "linf_star",
        best,
        witness_anchor=anchor,
        witness_shift=shift,
        attained=attained,
        evaluations=size,
    )
