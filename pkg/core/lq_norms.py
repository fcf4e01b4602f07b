"""
Lq discrepancies of point sets and their shifts.

Exact values are returned as L_q^q so they stay rational. Functions ending in
``_coords`` accept raw coordinate tuples in [0, 1] (the residues of limit
configurations may equal 1); the PointSet wrappers are the public entry
points.
"""

import logging
import math
from fractions import Fraction
from functools import cmp_to_key
from itertools import islice, product
from math import comb, prod
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp

from core.errors import BudgetExceededError
from core.extremal import LambdaMode, lambda_star, linf_star_exact, shift_breakpoints
from core.kernel import ONE, ZERO, limit_residues
from core.rng import CounterRNG
from core.scalar import SidedValue, Side, compare_exact, exact, exact_power, frac, to_rational
from models.config import SearchBudget
from models.geometry import IndexSubset, PointSet, ShiftVector
from models.results import Bound, Direction, EstimateKind, ExtremalResult, LqEstimate, Verdict

logger = logging.getLogger("lq_norms")

Coordinates = Sequence[Sequence[Fraction]]


class CellDecomposition:
    """
    Breakpoint grid of the anchor cube

    Cells are products of intervals (b_k, b_k+1] between consecutive
    breakpoints; on each cell the strict count A(Y) is constant and equals
    the number of points with every x_j <= b_k.
    """

    def __init__(self, coords: Coordinates, budget: Optional[SearchBudget] = None):
        budget = budget or SearchBudget()
        self.coords = [tuple(p) for p in coords]
        self.n = len(self.coords)
        self.dim = len(self.coords[0])
        self.breakpoints: List[List[Fraction]] = [
            sorted({ZERO, ONE} | {p[j] for p in self.coords}) for j in range(self.dim)
        ]
        self.size = prod(len(b) - 1 for b in self.breakpoints)
        logger.debug(f"Cell decomposition: {self.size} cells (budget {budget.cells})")
        if self.size > budget.cells:
            raise BudgetExceededError("cell decomposition", self.size, budget.cells)
        self._masks = [
            [sum(1 << i for i, p in enumerate(self.coords) if p[j] <= b) for b in bs[:-1]]
            for j, bs in enumerate(self.breakpoints)
        ]

    def cells(self) -> Iterator[Tuple[Tuple[Tuple[Fraction, Fraction], ...], int]]:
        """Yield (intervals, count) for every cell"""
        everyone = (1 << self.n) - 1
        ranges = [range(len(b) - 1) for b in self.breakpoints]
        for idx in product(*ranges):
            inside = everyone
            for j, k in enumerate(idx):
                inside &= self._masks[j][k]
            intervals = tuple((self.breakpoints[j][k], self.breakpoints[j][k + 1]) for j, k in enumerate(idx))
            yield intervals, inside.bit_count()

    def total_volume(self) -> Fraction:
        return sum((prod((b - a for a, b in cell), start=ONE) for cell, _ in self.cells()), start=ZERO)

    def integrate_power(self, power: int) -> Fraction:
        """
        Exact integral of (A(Y) - N * prod y_j)**power over the cube

        Args:
            power: Nonnegative integer exponent (signed integrand, no absolute value)

        Returns:
            Exact rational
        """
        # moments[j][k][e] = integral of y**e over the k-th interval of coordinate j
        moments = [
            [
                [(b ** (e + 1) - a ** (e + 1)) / (e + 1) for e in range(power + 1)]
                for a, b in zip(bs, bs[1:])
            ]
            for bs in self.breakpoints
        ]
        binomials = [comb(power, e) * (-self.n) ** e for e in range(power + 1)]

        everyone = (1 << self.n) - 1
        total = ZERO
        for idx in product(*(range(len(b) - 1) for b in self.breakpoints)):
            inside = everyone
            for j, k in enumerate(idx):
                inside &= self._masks[j][k]
            count = inside.bit_count()
            for e in range(power + 1):
                total += binomials[e] * count ** (power - e) * prod(
                    (moments[j][k][e] for j, k in enumerate(idx)), start=ONE
                )
        return total


# --- Exact values ---

def _check_even(q) -> int:
    q = to_rational(q)
    if q.denominator != 1 or q <= 0 or q.numerator % 2:
        raise ValueError(f"Exact cell integration needs an even positive integer q, got {q}")
    return q.numerator


def lq_exact_even_coords(coords: Coordinates, q: int, budget: Optional[SearchBudget] = None) -> Fraction:
    return CellDecomposition(coords, budget).integrate_power(_check_even(q))


def lq_exact_even(D: PointSet, q, budget: Optional[SearchBudget] = None) -> Fraction:
    """Exact L_q^q for even q by cell decomposition"""
    return lq_exact_even_coords(D.coordinates, q, budget)


def mean_via_cells(D: PointSet, budget: Optional[SearchBudget] = None) -> Fraction:
    """Exact integral of L[D, Y] over the anchors"""
    return CellDecomposition(D.coordinates, budget).integrate_power(1)


def warnock_coords(coords: Coordinates) -> Fraction:
    n = len(coords)
    d = len(coords[0])
    diagonal = sum((prod((1 - x for x in p), start=ONE) for p in coords), start=ZERO)
    pairs = ZERO
    for i in range(n):
        for k in range(i + 1, n):
            pairs += prod((1 - max(a, b) for a, b in zip(coords[i], coords[k])), start=ONE)
    mixed = sum((prod(((1 - x * x) / 2 for x in p), start=ONE) for p in coords), start=ZERO)
    return diagonal + 2 * pairs - 2 * n * mixed + Fraction(n * n, 3 ** d)


def l2_warnock(D: PointSet) -> Fraction:
    """
    Closed form of L_2^2

    Expanding (A(Y) - N v(Y))**2 and integrating term by term gives
    sum_{i,k} prod(1 - max(x_ij, x_kj)) - 2N sum_i prod((1 - x_ij**2) / 2)
    + N**2 3**-d.
    """
    return warnock_coords(D.coordinates)


def lq_exact_1d_coords(coords: Coordinates, q: int) -> Fraction:
    """
    Exact L_q^q in one dimension for every positive integer q

    On each cell the integrand is |k - N y|**q; cells are split where it
    vanishes (y = k/N), leaving polynomial pieces of constant sign.
    """
    if q < 1 or int(q) != q:
        raise ValueError(f"lq_exact_1d needs a positive integer q, got {q}")
    q = int(q)
    xs = sorted(p[0] for p in coords)
    n = len(xs)
    breakpoints = sorted({ZERO, ONE} | set(xs))
    total = ZERO
    for a, b in zip(breakpoints, breakpoints[1:]):
        k = sum(1 for x in xs if x <= a)
        root = Fraction(k, n)
        pieces = [(a, root), (root, b)] if a < root < b else [(a, b)]
        for lo, hi in pieces:
            sign = 1 if k - n * (lo + hi) / 2 >= 0 else -1
            piece = ((k - n * lo) ** (q + 1) - (k - n * hi) ** (q + 1)) / (n * (q + 1))
            total += sign ** q * piece
    return total


def lq_exact_1d(D: PointSet, q: int) -> Fraction:
    if D.dim != 1:
        raise ValueError("lq_exact_1d is defined for d = 1 only")
    return lq_exact_1d_coords(D.coordinates, q)


def lq_power_1d_coords(coords: Coordinates, q) -> sp.Expr:
    """
    Exact L_q^q in one dimension for any positive rational q

    Same pieces as lq_exact_1d_coords. On a piece |k - N y| is affine
    without an interior zero, so its q-th power integrates to a difference
    of (q+1)-th powers of the end values.
    """
    q = to_rational(q)
    if q <= 0:
        raise ValueError(f"q must be positive, got {q}")
    if q.denominator == 1:
        return exact(lq_exact_1d_coords(coords, q.numerator))
    xs = sorted(p[0] for p in coords)
    n = len(xs)
    breakpoints = sorted({ZERO, ONE} | set(xs))
    scale = exact(n * (q + 1))
    terms = []
    for a, b in zip(breakpoints, breakpoints[1:]):
        k = sum(1 for x in xs if x <= a)
        root = Fraction(k, n)
        pieces = [(a, root), (root, b)] if a < root < b else [(a, b)]
        for lo, hi in pieces:
            small, large = sorted((abs(k - n * lo), abs(k - n * hi)))
            terms.append((exact_power(large, q + 1) - exact_power(small, q + 1)) / scale)
    return sp.Add(*terms)


def lq_power_1d(D: PointSet, q) -> sp.Expr:
    if D.dim != 1:
        raise ValueError("lq_power_1d is defined for d = 1 only")
    return lq_power_1d_coords(D.coordinates, q)


def lq_shifted_exact(D: PointSet, Z: ShiftVector, q, budget: Optional[SearchBudget] = None) -> Fraction:
    """Exact L_q^q of D + Z for even q (limit shifts use the limit configuration)"""
    return lq_exact_even_coords(limit_residues(D, Z), q, budget)


# --- Monte Carlo ---

def lq_numeric(D: PointSet, q, samples: int, seed: int) -> LqEstimate:
    """
    Monte Carlo estimate of L_q with its standard error

    Sample anchors are exact dyadic rationals k / 2**64 drawn from a
    counter-based stream, so each |L[D, Y]| is exact and the estimate is
    reproducible from (seed, samples).

    Args:
        D: Point set
        q: Positive rational exponent
        samples: Number of anchors (>= 1)
        seed: Stream seed

    Returns:
        LqEstimate of kind MONTE_CARLO; stderr is None for a single sample
    """
    q = to_rational(q)
    if q <= 0:
        raise ValueError(f"q must be positive, got {q}")
    if samples < 1:
        raise ValueError("lq_numeric needs at least one sample")
    rng = CounterRNG(seed)
    coords = D.coordinates
    d = D.dim
    values = np.empty(samples, dtype=np.float64)
    for s in range(samples):
        y = [rng.uniform_rational(s * d + j) for j in range(d)]
        count = sum(1 for p in coords if all(x < t for x, t in zip(p, y)))
        local = abs(count - D.N * prod(y, start=ONE))
        if q.denominator == 1:
            values[s] = float(local ** q.numerator)
        else:
            values[s] = float(local) ** float(q)

    mean = float(values.mean())
    value = mean ** (1 / float(q))
    stderr = None
    if samples > 1:
        stderr_mean = float(values.std(ddof=1)) / math.sqrt(samples)
        # delta method for the q-th root
        stderr = value / (float(q) * mean) * stderr_mean if mean > 0 else 0.0
    logger.debug(f"lq_numeric {D!r} q={q}: {value} (stderr {stderr}, {samples} samples)")
    return LqEstimate(q, EstimateKind.MONTE_CARLO, value, stderr=stderr, samples=samples, seed=seed)


# --- Certified lower bounds under shifts ---

def _l1_lower_coords(coords: Coordinates, linf_upper: Fraction, budget: SearchBudget) -> Fraction:
    """
    Lower bound of L_1 of a configuration (exact when d = 1)

    |mean of L| and L_2^2 / sup|L| both bound the integral of |L| from below.
    """
    if len(coords[0]) == 1:
        return lq_exact_1d_coords(coords, 1)
    mean = abs(CellDecomposition(coords, budget).integrate_power(1))
    return max(mean, warnock_coords(coords) / linf_upper)


def shift_lower_pow(coords: Coordinates, q: Fraction, linf_upper: Fraction, budget: SearchBudget) -> sp.Expr:
    """
    Certified lower bound of L_q^q for one configuration

    Args:
        coords: Coordinates of the (shifted) set
        q: Positive rational exponent
        linf_upper: Any upper bound of sup|L| for the configuration
        budget: Cell budget for the exact integrals

    Returns:
        Exact for even q and for every q when d = 1; a lower bound otherwise
    """
    d = len(coords[0])
    if d == 1:
        return lq_power_1d_coords(coords, q)
    if q.denominator == 1 and q.numerator % 2 == 0:
        return exact(lq_exact_even_coords(coords, q.numerator, budget))

    l1 = _l1_lower_coords(coords, linf_upper, budget)
    if q < 1:
        # Hoelder: L_1 <= L_q^q * sup|L|^(1-q)
        return exact(l1) * exact_power(linf_upper, q - 1)
    candidates = [exact_power(l1, q)]
    even = 2 * (q.numerator // (2 * q.denominator))
    if even >= 2:
        candidates.append(exact_power(lq_exact_even_coords(coords, even, budget), q / even))
    return max(candidates, key=cmp_to_key(compare_exact))


def _dyadic_points(breakpoints: Sequence[Fraction], depth: int) -> List[Fraction]:
    edges = list(breakpoints) + [ONE]
    points = set(breakpoints)
    for a, b in zip(edges, edges[1:]):
        step = (b - a) / 2 ** depth
        points.update(a + step * m for m in range(1, 2 ** depth))
    return sorted(points)


def shift_candidates(D: PointSet, priority: Sequence[ShiftVector] = ()) -> Iterator[ShiftVector]:
    """
    Deterministic stream of shifts for the Lq* search

    Order: Z = 0, the priority shifts, the breakpoint vertices (at and left
    limit), then grids refined dyadically inside the breakpoint cells.
    Repeats are skipped, so every prefix is a superset of shorter prefixes.
    """
    seen = set()

    def fresh(shift: ShiftVector) -> bool:
        if shift in seen:
            return False
        seen.add(shift)
        return True

    zero = ShiftVector.zeros(D.dim)
    if fresh(zero):
        yield zero
    for shift in priority:
        if fresh(shift):
            yield shift

    breakpoints = shift_breakpoints(D, IndexSubset.full(D.dim))
    vertices = [[SidedValue(b, side) for b in bs for side in (Side.AT, Side.LEFT_LIMIT)] for bs in breakpoints]
    for choice in product(*vertices):
        shift = ShiftVector(choice)
        if fresh(shift):
            yield shift

    depth = 1
    while True:
        grids = [_dyadic_points(bs, depth) for bs in breakpoints]
        for choice in product(*grids):
            shift = ShiftVector(choice)
            if fresh(shift):
                yield shift
        depth += 1


def lq_star_lower(
    D: PointSet,
    q,
    budget: Optional[SearchBudget] = None,
    linf_star: Optional[Fraction] = None,
    priority: Optional[Sequence[ShiftVector]] = None,
) -> LqEstimate:
    """
    Certified lower bound of L_q* = sup over shifts of L_q[D + Z]

    Every evaluated shift certifies a lower bound; the best one over the
    first budget.shift_evaluations shifts of shift_candidates is returned.

    Args:
        D: Point set
        q: Positive rational exponent
        budget: Enumeration caps (shift_evaluations bounds the search)
        linf_star: Known L_inf*, used as the sup|L| bound of every shift
        priority: Shifts to try right after Z = 0; defaults to the
            lambda* witness over all coordinates

    Returns:
        LqEstimate of kind LOWER_BOUND with value_pow_q and witness_shift
    """
    budget = budget or SearchBudget()
    q = to_rational(q)
    if q <= 0:
        raise ValueError(f"q must be positive, got {q}")
    if linf_star is None:
        try:
            linf_star = linf_star_exact(D, budget).value
        except BudgetExceededError as e:
            logger.debug(f"lq_star_lower falls back to sup|L| <= N: {e}")
            linf_star = Fraction(D.N)
    if priority is None:
        try:
            priority = [lambda_star(D, IndexSubset.full(D.dim), LambdaMode.ABS, budget).witness_shift]
        except BudgetExceededError as e:
            logger.debug(f"lq_star_lower without lambda* witness: {e}")
            priority = []

    best: Optional[sp.Expr] = None
    best_shift: Optional[ShiftVector] = None
    evaluations = 0
    for shift in islice(shift_candidates(D, priority), budget.shift_evaluations):
        try:
            bound = shift_lower_pow(limit_residues(D, shift), q, linf_star, budget)
        except BudgetExceededError as e:
            logger.debug(f"Skipping shift {shift!r}: {e}")
            continue
        evaluations += 1
        if best is None or compare_exact(bound, best) > 0:
            best, best_shift = bound, shift
    if best is None:
        raise BudgetExceededError("lq_star_lower", 1, 0)

    return LqEstimate(
        q,
        EstimateKind.LOWER_BOUND,
        float(best) ** (1 / float(q)),
        value_pow_q=best,
        witness_shift=best_shift,
        evaluations=evaluations,
    )


# --- L_1* in one dimension ---

def _quadratic_through(points: Sequence[Tuple[Fraction, Fraction]]) -> Tuple[Fraction, Fraction, Fraction]:
    """Coefficients (c0, c1, c2) of the parabola through three points"""
    (t0, v0), (t1, v1), (t2, v2) = points
    c2 = ((v2 - v0) / (t2 - t0) - (v1 - v0) / (t1 - t0)) / (t2 - t1)
    c1 = (v1 - v0) / (t1 - t0) - c2 * (t0 + t1)
    c0 = v0 - c1 * t0 - c2 * t0 * t0
    return c0, c1, c2


def _l1_at(D: PointSet, shift: ShiftVector) -> Fraction:
    return lq_exact_1d_coords(limit_residues(D, shift), 1)


def l1_star_exact_1d(D: PointSet) -> ExtremalResult:
    """
    Exact L_1* for d = 1

    Between shifts where some shifted point crosses a multiple of 1/N (or
    the seam), L_1[D + z] is a quadratic polynomial in z. Each piece is
    recovered from three interior evaluations and maximized exactly over
    its closure.
    """
    if D.dim != 1:
        raise ValueError("l1_star_exact_1d is defined for d = 1 only")
    n = D.N
    xs = D.column(0)
    breakpoints = sorted({frac(Fraction(k, n) - x) for x in xs for k in range(n)})
    edges = breakpoints + [breakpoints[0] + 1]

    best: Optional[Fraction] = None
    best_shift: Optional[ShiftVector] = None
    for a, b in zip(edges, edges[1:]):
        samples = [a + (b - a) * Fraction(m, 4) for m in (1, 2, 3)]
        c0, c1, c2 = _quadratic_through([(t, _l1_at(D, ShiftVector([t]))) for t in samples])
        candidates = [SidedValue(a), SidedValue(b, Side.LEFT_LIMIT)]
        if c2 < 0:
            vertex = -c1 / (2 * c2)
            if a < vertex < b:
                candidates.insert(1, SidedValue(vertex))
        for z in candidates:
            value = c0 + c1 * z.value + c2 * z.value * z.value
            if best is None or value > best:
                best, best_shift = value, ShiftVector([z])

    attained = _l1_at(D, best_shift.at()) == best
    if attained:
        best_shift = best_shift.at()
    return ExtremalResult("l1_star", best, witness_shift=best_shift, attained=attained, evaluations=3 * len(breakpoints))


def _l1_star_side(D: PointSet, linf_star: ExtremalResult) -> Tuple[Bound, Optional[List[ShiftVector]]]:
    """Upper side for L_1*: exact for d = 1, L_inf* otherwise; plus priority shifts"""
    if D.dim == 1:
        l1_star = l1_star_exact_1d(D)
        return Bound(l1_star.value, Direction.EXACT, note="L1*"), [l1_star.witness_shift]
    return Bound(linf_star.value, Direction.UPPER, note="L1* <= Linf*"), None


def interpolation_check(D: PointSet, q, budget: Optional[SearchBudget] = None) -> Verdict:
    """
    Check L_1* <= (L_q*)^q * (L_inf*)^(1-q) for 0 < q <= 1

    The left side is bounded from above (exactly for d = 1, by L_inf*
    otherwise), the right side from below through a certified lower bound of
    (L_q*)^q, so HOLDS is always certified.
    """
    budget = budget or SearchBudget()
    q = to_rational(q)
    if not 0 < q <= 1:
        raise ValueError(f"interpolation_check needs 0 < q <= 1, got {q}")
    try:
        linf_star = linf_star_exact(D, budget)
        lhs, priority = _l1_star_side(D, linf_star)
        lq_star = lq_star_lower(D, q, budget, linf_star=linf_star.value, priority=priority)
    except BudgetExceededError as e:
        logger.warning(f"interpolation q={q} on {D!r} is inconclusive: {e}")
        return Verdict.inconclusive("interpolation", str(e), q=q)

    rhs_value = lq_star.value_pow_q * exact_power(linf_star.value, 1 - q)
    rhs = Bound(rhs_value, Direction.LOWER, note="(Lq*)^q * (Linf*)^(1-q)")
    witnesses = {
        "linf_star": linf_star.to_dict(),
        "lq_star_lower": lq_star.to_dict(),
    }
    return Verdict.decide("interpolation", lhs, rhs, q=q, witnesses=witnesses)


def interpolation_check_finite(D: PointSet, q, p, budget: Optional[SearchBudget] = None) -> Verdict:
    """
    Check L_1* <= (L_q*)^(q(p-1)/(p-q)) * (L_p*)^(p(1-q)/(p-q)) for 0 < q < 1 < p

    interpolation_check is the limit p -> inf. Both factors on the right are
    bounded from below through certified lower bounds of (L_q*)^q and
    (L_p*)^p, raised to positive exponents.
    """
    budget = budget or SearchBudget()
    q, p = to_rational(q), to_rational(p)
    if not 0 < q < 1 < p:
        raise ValueError(f"interpolation_check_finite needs 0 < q < 1 < p, got q={q}, p={p}")
    try:
        linf_star = linf_star_exact(D, budget)
        lhs, priority = _l1_star_side(D, linf_star)
        lq_star = lq_star_lower(D, q, budget, linf_star=linf_star.value, priority=priority)
        lp_star = lq_star_lower(D, p, budget, linf_star=linf_star.value, priority=priority)
    except BudgetExceededError as e:
        logger.warning(f"interpolation q={q}, p={p} on {D!r} is inconclusive: {e}")
        return Verdict.inconclusive("interpolation_p", str(e), q=q, p=p)

    rhs_value = (
        exact_power(lq_star.value_pow_q, (p - 1) / (p - q))
        * exact_power(lp_star.value_pow_q, (1 - q) / (p - q))
    )
    rhs = Bound(rhs_value, Direction.LOWER, note="(Lq*)^(q(p-1)/(p-q)) * (Lp*)^(p(1-q)/(p-q))")
    witnesses = {
        "linf_star": linf_star.to_dict(),
        "lq_star_lower": lq_star.to_dict(),
        "lp_star_lower": lp_star.to_dict(),
    }
    return Verdict.decide("interpolation_p", lhs, rhs, q=q, p=p, witnesses=witnesses)
