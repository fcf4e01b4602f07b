"""
Exact scalar layer.

Every discrepancy value in the toolkit is an exact ``fractions.Fraction``.
One-sided limits are carried by ``SidedValue``: the pair (value, side) is read
as ``value + side * eps`` for a single infinitesimal ``eps`` shared by all the
quantities of one evaluation, so sums, differences and comparisons of sided
values stay exact. Rational powers (the C_{d,q} constants, q-th roots of
L_q^q) are sympy expressions, compared exactly by `compare_exact`.
"""

import math
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Dict, Tuple, Union

import sympy as sp

Rational = Fraction
RationalLike = Union[Fraction, int, str]

FLOAT_DIGITS = 17
MAX_POWER_ROUNDS = 8
ENCLOSURE_BITS = (256, 1024, 4096)


class Side(IntEnum):
    """Direction of approach; the integer value is the coefficient of eps"""
    LEFT_LIMIT = -1
    AT = 0
    RIGHT_LIMIT = 1

    @property
    def label(self) -> str:
        return {-1: "left", 0: "at", 1: "right"}[int(self)]

    @classmethod
    def from_label(cls, label: str) -> "Side":
        lookup = {"left": cls.LEFT_LIMIT, "at": cls.AT, "right": cls.RIGHT_LIMIT}
        try:
            return lookup[label.lower()]
        except KeyError:
            raise ValueError(f"Unknown side flag: {label!r}") from None


# --- Rational helpers ---

def parse_rational(text: str) -> Fraction:
    """
    Parse "p/q", an integer or a finite decimal string into an exact rational

    Args:
        text: String form of the number

    Returns:
        Exact rational value
    """
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"Not an exact rational: {text!r}") from e


def to_rational(x: RationalLike) -> Fraction:
    """Coerce ints, strings and fractions to Fraction; floats are rejected"""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("Booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"Cannot convert {type(x).__name__} to an exact rational")


def format_rational(x: RationalLike) -> str:
    """Canonical "p/q" form (lowest terms, q > 0, slash always present)"""
    x = to_rational(x)
    return f"{x.numerator}/{x.denominator}"


def render_float(x) -> str:
    """Float rendering with 17 significant digits (round-half-even)"""
    return format(float(x), f".{FLOAT_DIGITS}g")


def frac(x: RationalLike) -> Fraction:
    """Fractional part {x} in [0, 1)"""
    x = to_rational(x)
    return x - math.floor(x)


# --- One-sided values ---

@dataclass(frozen=True, order=True)
class SidedValue:
    """A rational value, optionally approached from one side"""
    value: Fraction
    side: Side = Side.AT

    def __post_init__(self):
        object.__setattr__(self, "value", to_rational(self.value))
        object.__setattr__(self, "side", Side(self.side))

    def __add__(self, other: "SidedValue") -> "SidedValue":
        other = sided(other)
        return SidedValue(self.value + other.value, _sign(self.side + other.side))

    def __sub__(self, other: "SidedValue") -> "SidedValue":
        other = sided(other)
        return SidedValue(self.value - other.value, _sign(self.side - other.side))

    def at(self) -> "SidedValue":
        """Same value evaluated ordinarily"""
        return SidedValue(self.value)

    def to_dict(self) -> Dict[str, str]:
        return {"value": format_rational(self.value), "side": self.side.label}

    @classmethod
    def from_dict(cls, data) -> "SidedValue":
        if isinstance(data, dict):
            return cls(parse_rational(str(data["value"])), Side.from_label(data.get("side", "at")))
        return cls(to_rational(data))

    def __str__(self):
        suffix = {Side.LEFT_LIMIT: "-", Side.AT: "", Side.RIGHT_LIMIT: "+"}[self.side]
        return f"{format_rational(self.value)}{suffix}"


def _sign(n: int) -> Side:
    return Side((n > 0) - (n < 0))


def sided(x) -> SidedValue:
    """Coerce a rational (or a SidedValue) to a SidedValue"""
    if isinstance(x, SidedValue):
        return x
    return SidedValue(to_rational(x))


def frac_with_side(x) -> SidedValue:
    """
    Fractional part of a sided value, keeping the side

    The left limit at an integer is (1, LEFT_LIMIT): the sawtooth approaches 1
    from below there.
    """
    x = sided(x)
    f = frac(x.value)
    if f == 0 and x.side == Side.LEFT_LIMIT:
        return SidedValue(Fraction(1), Side.LEFT_LIMIT)
    return SidedValue(f, x.side)


def frac_sided(x) -> Fraction:
    """Fractional part evaluated at, or as a one-sided limit towards, x"""
    return frac_with_side(x).value


# --- Exact powers with rational exponents (sympy) ---

def exact(x) -> sp.Expr:
    """Sympy form of a rational (or an exact sympy value, returned as is)"""
    if isinstance(x, sp.Basic):
        return x
    x = to_rational(x)
    return sp.Rational(x.numerator, x.denominator)


def exact_power(base, exponent) -> sp.Expr:
    """
    base ** exponent for a nonnegative exact base and a rational exponent

    Sympy folds perfect powers, so (1/8)**(2/3) comes back as 1/4.
    """
    base = exact(base)
    exponent = exact(exponent)
    if base.is_negative:
        raise ValueError(f"Negative base {base} in a rational power")
    if base.is_zero and exponent.is_negative:
        raise ZeroDivisionError("Zero raised to a negative power")
    return base ** exponent


def is_exact_rational(x) -> bool:
    return bool(exact(x).is_Rational)


def to_fraction(x) -> Fraction:
    """Fraction form of an exact value that is rational"""
    if isinstance(x, Fraction):
        return x
    x = exact(x)
    if not x.is_Rational:
        raise ValueError(f"{x} is not rational")
    return Fraction(int(x.p), int(x.q))


def format_exact(x) -> str:
    """"p/q" for rationals, sympy's string form otherwise"""
    x = exact(x)
    if x.is_Rational:
        return format_rational(to_fraction(x))
    return sp.sstr(x)


def _exact_sign(x: sp.Expr) -> int:
    return int(sp.sign(x))


def _is_power_product(x: sp.Expr) -> bool:
    """Rational, rational power of a rational, or a product of those"""
    if x.is_Rational:
        return True
    if x.is_Pow:
        return bool(x.base.is_Rational and x.exp.is_Rational)
    if x.is_Mul:
        return all(_is_power_product(factor) for factor in x.args)
    return False


def _compare_by_enclosure(a: sp.Expr, b: sp.Expr) -> int:
    """Sign of a - b for general algebraic values (sums of radicals)"""
    difference = a - b
    lo, hi = rational_enclosure(difference)
    if lo > 0 or hi < 0 or lo == hi:
        return (lo > 0) - (hi < 0)
    if sp.simplify(difference) == 0:
        return 0
    for bits in ENCLOSURE_BITS:
        lo, hi = rational_enclosure(difference, bits)
        if lo > 0 or hi < 0:
            return (lo > 0) - (hi < 0)
    raise ValueError(f"Cannot separate {a} and {b}")


def compare_exact(a, b) -> int:
    """
    Sign of a - b, decided exactly

    Products of rational powers are compared by raising the positive ratio
    a / b to the common denominator of its exponents until it is rational.
    Other values (sums of radicals) are separated by certified enclosures,
    with sympy deciding exact equality.
    """
    a, b = exact(a), exact(b)
    if a.is_Rational and b.is_Rational:
        x, y = to_fraction(a), to_fraction(b)
        return (x > y) - (x < y)
    if not (_is_power_product(a) and _is_power_product(b)):
        return _compare_by_enclosure(a, b)
    s, t = _exact_sign(a), _exact_sign(b)
    if s != t or s == 0:
        return (s > t) - (s < t)
    ratio = a / b
    for _ in range(MAX_POWER_ROUNDS):
        if ratio.is_Rational:
            r = to_fraction(ratio)
            magnitude = (r > 1) - (r < 1)
            return magnitude if s > 0 else -magnitude
        k = 1
        for power in ratio.atoms(sp.Pow):
            if power.exp.is_Rational:
                k = sp.ilcm(k, power.exp.q)
        if k == 1:
            break
        ratio = sp.powsimp(ratio ** k)
    return _compare_by_enclosure(a, b)


def rational_enclosure(x, bits: int = 64) -> Tuple[Fraction, Fraction]:
    """Certified rational bounds lo <= x <= hi on the grid 2**-bits"""
    x = exact(x)
    if x.is_Rational:
        value = to_fraction(x)
        return value, value
    scale = 1 << bits
    lo = Fraction(int(sp.floor(x * scale)), scale)
    hi = Fraction(int(sp.ceiling(x * scale)), scale)
    return lo, hi


def certified_difference(larger, smaller, bits: int = 64) -> Fraction:
    """
    Rational lower bound of larger - smaller whose sign matches the exact sign

    Exact when both operands are rational; 0 on exact equality.
    """
    larger, smaller = exact(larger), exact(smaller)
    if larger.is_Rational and smaller.is_Rational:
        return to_fraction(larger) - to_fraction(smaller)
    order = compare_exact(larger, smaller)
    if order == 0:
        return Fraction(0)
    while True:
        margin = rational_enclosure(larger, bits)[0] - rational_enclosure(smaller, bits)[1]
        # a negative exact difference makes any lower bound negative too
        if order < 0 or margin > 0:
            return margin
        bits *= 2
