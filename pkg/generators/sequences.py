"""
Exact-rational point-set families.
"""

import logging
from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence

from core.errors import DimensionMismatchError, GeneratorError
from core.rng import CounterRNG
from core.scalar import frac, sided
from models.geometry import PointSet, ShiftVector

logger = logging.getLogger("generators")


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise GeneratorError(message)


def gen_random(n: int, d: int, denominator: int, seed: int) -> PointSet:
    """
    n points with coordinates k/denominator, k uniform and seeded

    Args:
        n: Number of points
        d: Dimension
        denominator: Common denominator of the coordinates
        seed: Stream seed; the same seed gives the same set

    Returns:
        PointSet
    """
    _require(n >= 1, f"n must be >= 1, got {n}")
    _require(d >= 1, f"d must be >= 1, got {d}")
    _require(denominator >= 2, f"denominator must be >= 2, got {denominator}")
    rng = CounterRNG(seed)
    points = [
        [Fraction(rng.randbelow(i * d + j, denominator), denominator) for j in range(d)]
        for i in range(n)
    ]
    return PointSet(d, points, label=f"random(n={n},d={d},denominator={denominator},seed={seed})")


def gen_korobov(n: int, a: int, d: int) -> PointSet:
    """Rank-1 lattice ({i/n}, {i a/n}, ..., {i a^(d-1)/n}) for i = 0..n-1"""
    _require(n >= 2, f"Korobov lattices need n >= 2, got {n}")
    _require(1 <= a < n, f"Korobov generator must satisfy 1 <= a < n, got a={a}, n={n}")
    _require(d >= 1, f"d must be >= 1, got {d}")
    multipliers = [pow(a, j, n) for j in range(d)]
    points = [[Fraction(i * m % n, n) for m in multipliers] for i in range(n)]
    return PointSet(d, points, label=f"korobov(n={n},a={a},d={d})")


def radical_inverse(i: int, base: int) -> Fraction:
    """Digits of i in `base` mirrored about the radix point, as an exact rational"""
    result = Fraction(0)
    scale = Fraction(1, base)
    while i > 0:
        i, digit = divmod(i, base)
        result += digit * scale
        scale /= base
    return result


def gen_van_der_corput(n: int, base: int = 2) -> PointSet:
    """One-dimensional van der Corput points phi_base(0..n-1)"""
    _require(n >= 1, f"n must be >= 1, got {n}")
    _require(base >= 2, f"base must be >= 2, got {base}")
    return PointSet(1, [[radical_inverse(i, base)] for i in range(n)], label=f"van_der_corput(n={n},base={base})")


def _first_primes(count: int) -> List[int]:
    primes: List[int] = []
    candidate = 2
    while len(primes) < count:
        if all(candidate % p for p in primes):
            primes.append(candidate)
        candidate += 1
    return primes


def gen_hammersley(n: int, d: int, bases: Optional[Sequence[int]] = None) -> PointSet:
    """
    Hammersley set: (i/n, phi_b1(i), ..., phi_b(d-1)(i)) for i = 0..n-1

    Bases default to the first d-1 primes and must be pairwise coprime.
    """
    _require(n >= 1, f"n must be >= 1, got {n}")
    _require(d >= 1, f"d must be >= 1, got {d}")
    bases = list(bases) if bases else _first_primes(d - 1)
    _require(len(bases) == d - 1, f"Hammersley in d={d} needs {d - 1} bases, got {len(bases)}")
    _require(all(b >= 2 for b in bases), "Hammersley bases must be >= 2")
    for k, b in enumerate(bases):
        for c in bases[k + 1:]:
            _require(gcd(b, c) == 1, f"Hammersley bases must be pairwise coprime, got {b} and {c}")
    points = [[Fraction(i, n)] + [radical_inverse(i, b) for b in bases] for i in range(n)]
    label = f"hammersley(n={n},d={d},bases={'/'.join(str(b) for b in bases)})"
    return PointSet(d, points, label=label)


def apply_shift(D: PointSet, Z) -> PointSet:
    """
    Residues of x + Z for every point, multiplicities preserved

    Side flags on Z are ignored; kernel.limit_residues handles limit shifts.
    """
    shift = Z if isinstance(Z, ShiftVector) else ShiftVector(sided(z) for z in Z)
    if shift.dim != D.dim:
        raise DimensionMismatchError(D.dim, shift.dim)
    values = shift.values()
    points = [[frac(x + z) for x, z in zip(point, values)] for point in D]
    return PointSet(D.dim, points, label=D.label)
