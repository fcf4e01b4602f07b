from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Optional

import sympy as sp

from core.scalar import certified_difference, compare_exact, exact, exact_power, format_exact, format_rational, render_float
from models.geometry import Anchor, ShiftVector


class ExtremalResult:
    """Exact supremum of an extremal search together with its maximizer"""

    def __init__(
        self,
        quantity: str,
        value: Fraction,
        witness_anchor: Optional[Anchor] = None,
        witness_shift: Optional[ShiftVector] = None,
        attained: bool = True,
        evaluations: int = 0,
    ):
        self.quantity = quantity
        self.value = value
        self.witness_anchor = witness_anchor
        self.witness_shift = witness_shift
        self.attained = attained
        self.evaluations = evaluations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "quantity": self.quantity,
            "value": format_rational(self.value),
            "value_float": float(self.value),
            "attained": self.attained,
            "witness_anchor": self.witness_anchor.to_dict() if self.witness_anchor else None,
            "witness_shift": self.witness_shift.to_dict() if self.witness_shift else None,
            "evaluations": self.evaluations,
        }

    def __repr__(self):
        return f"<ExtremalResult {self.quantity}={format_rational(self.value)} attained={self.attained}>"


class EstimateKind(str, Enum):
    EXACT = "exact"
    LOWER_BOUND = "lower_bound"
    MONTE_CARLO = "monte_carlo"


class LqEstimate:
    """
    Value of an Lq discrepancy

    `value_pow_q` holds the exact (or certified lower) value of L_q^q when
    one is known; Monte Carlo estimates only carry floats.
    """

    def __init__(
        self,
        q: Fraction,
        kind: EstimateKind,
        value_float: float,
        value_pow_q: Optional[sp.Expr] = None,
        stderr: Optional[float] = None,
        samples: Optional[int] = None,
        seed: Optional[int] = None,
        witness_shift: Optional[ShiftVector] = None,
        evaluations: int = 0,
    ):
        self.q = q
        self.kind = kind
        self.value_float = value_float
        self.value_pow_q = value_pow_q
        self.stderr = stderr
        self.samples = samples
        self.seed = seed
        self.witness_shift = witness_shift
        self.evaluations = evaluations

    def value(self) -> Optional[sp.Expr]:
        """Exact L_q (the q-th root of value_pow_q) when value_pow_q is known"""
        if self.value_pow_q is None:
            return None
        return exact_power(self.value_pow_q, 1 / self.q)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q": format_rational(self.q),
            "kind": self.kind.value,
            "value_pow_q": format_exact(self.value_pow_q) if self.value_pow_q is not None else None,
            "value_float": float(self.value_float),
            "stderr": float(self.stderr) if self.stderr is not None else None,
            "samples": self.samples,
            "seed": self.seed,
            "witness_shift": self.witness_shift.to_dict() if self.witness_shift else None,
            "evaluations": self.evaluations,
        }

    def __repr__(self):
        return f"<LqEstimate q={format_rational(self.q)} {self.kind.value} {render_float(self.value_float)}>"


class Direction(str, Enum):
    """How a bound relates to the true value of the quantity it stands for"""
    EXACT = "exact"
    LOWER = "lower"
    UPPER = "upper"


class Bound:
    """One side of an inequality: an exact value or a certified one-sided bound"""

    def __init__(self, value, direction: Direction = Direction.EXACT, note: str = ""):
        self.value = exact(value)
        self.direction = direction
        self.note = note

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "value": format_exact(self.value),
            "value_float": float(self.value),
            "direction": self.direction.value,
        }
        if self.note:
            data["note"] = self.note
        return data

    def __repr__(self):
        return f"<Bound {self.direction.value} {self.value}>"


class VerdictStatus(str, Enum):
    HOLDS = "HOLDS"
    VIOLATED = "VIOLATED"
    INCONCLUSIVE = "INCONCLUSIVE"


class Verdict:
    """Outcome of checking lhs <= rhs for one inequality instance"""

    def __init__(
        self,
        inequality: str,
        status: VerdictStatus,
        lhs: Optional[Bound] = None,
        rhs: Optional[Bound] = None,
        margin: Optional[Fraction] = None,
        q: Optional[Fraction] = None,
        subset: Optional[str] = None,
        witnesses: Optional[Dict[str, Any]] = None,
        diagnostics: str = "",
        p: Optional[Fraction] = None,
    ):
        self.inequality = inequality
        self.status = status
        self.lhs = lhs
        self.rhs = rhs
        self.margin = margin
        self.q = q
        self.subset = subset
        self.p = p
        self.witnesses = witnesses or {}
        self.diagnostics = diagnostics

    @classmethod
    def decide(cls, inequality: str, lhs: Bound, rhs: Bound, **kwargs) -> "Verdict":
        """
        Certify lhs <= rhs from the two bounds

        HOLDS needs an upper-or-exact lhs and a lower-or-exact rhs; VIOLATED
        needs the opposite pair. Anything else stays INCONCLUSIVE.
        """
        order = compare_exact(lhs.value, rhs.value)
        lhs_from_above = lhs.direction in (Direction.EXACT, Direction.UPPER)
        rhs_from_below = rhs.direction in (Direction.EXACT, Direction.LOWER)
        lhs_from_below = lhs.direction in (Direction.EXACT, Direction.LOWER)
        rhs_from_above = rhs.direction in (Direction.EXACT, Direction.UPPER)

        if order <= 0 and lhs_from_above and rhs_from_below:
            status = VerdictStatus.HOLDS
        elif order > 0 and lhs_from_below and rhs_from_above:
            status = VerdictStatus.VIOLATED
        else:
            status = VerdictStatus.INCONCLUSIVE
        margin = certified_difference(rhs.value, lhs.value)
        return cls(inequality, status, lhs=lhs, rhs=rhs, margin=margin, **kwargs)

    @classmethod
    def inconclusive(cls, inequality: str, diagnostics: str, **kwargs) -> "Verdict":
        return cls(inequality, VerdictStatus.INCONCLUSIVE, diagnostics=diagnostics, **kwargs)

    @property
    def key(self) -> str:
        """Short id such as "lemma2{1,2}@q=2" used in sweep rows"""
        text = self.inequality
        if self.subset is not None:
            text += self.subset
        if self.q is not None:
            text += f"@q={self.q}"
        if self.p is not None:
            text += f",p={self.p}"
        return text

    def to_dict(self) -> Dict[str, Any]:
        return {
            "inequality": self.inequality,
            "status": self.status.value,
            "q": format_rational(self.q) if self.q is not None else None,
            "subset": self.subset,
            "p": format_rational(self.p) if self.p is not None else None,
            "lhs": self.lhs.to_dict() if self.lhs else None,
            "rhs": self.rhs.to_dict() if self.rhs else None,
            "margin": format_rational(self.margin) if self.margin is not None else None,
            "witnesses": self.witnesses,
            "diagnostics": self.diagnostics,
        }

    def __repr__(self):
        return f"<Verdict {self.key} {self.status.value}>"
