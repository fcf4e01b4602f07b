"""
Certified checks of the discrepancy inequalities.

Every check reads as lhs <= rhs. Sides are exact values or one-sided bounds
(see models.results.Bound); Verdict.decide turns them into HOLDS, VIOLATED or
INCONCLUSIVE without ever over-claiming.
"""

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy as sp

from core.errors import BudgetExceededError
from core.extremal import LambdaMode, complete_shift, lambda_star, linf_exact, linf_star_exact
from core.lq_norms import interpolation_check, interpolation_check_finite, lq_star_lower
from core.scalar import exact, exact_power, to_rational
from models.config import INEQUALITY_IDS, SearchBudget
from models.geometry import IndexSubset, PointSet, ShiftVector
from models.results import Bound, Direction, ExtremalResult, LqEstimate, Verdict, VerdictStatus

logger = logging.getLogger("verify")

SUBSET_INEQUALITIES = {"lemma2", "lemma2_stated", "lemma2_inf"}
Q_INEQUALITIES = {
    "lemma2", "lemma2_stated", "corollary_lower", "corollary_upper", "interpolation", "interpolation_p",
}
ESCALATING = {"lemma2", "lemma2_stated", "corollary_upper", "interpolation", "interpolation_p"}
DEFAULT_INTERPOLATION_P = Fraction(2)


def lev_constant(d: int, q) -> sp.Expr:
    """
    Constant C_{d,q} of the upper corollary

    (5/2)**d for q >= 1 and (5/2)**(d/q) * 3**(d/q - d) for 0 < q < 1. The
    result is rational whenever the exponents are integral.
    """
    q = to_rational(q)
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")
    if q <= 0:
        raise ValueError(f"q must be positive, got {q}")
    if q >= 1:
        return exact(Fraction(5, 2) ** d)
    exponent = Fraction(d) / q
    return exact_power(Fraction(5, 2), exponent) * exact_power(3, exponent - d)


def applicable(name: str, q: Optional[Fraction]) -> bool:
    """Whether inequality `name` is stated for exponent q"""
    if name not in Q_INEQUALITIES:
        return True
    if q is None:
        return False
    if name in ("lemma2", "lemma2_stated"):
        return q >= 1
    if name == "interpolation":
        return 0 < q <= 1
    if name == "interpolation_p":
        return 0 < q < 1
    return q > 0


class InequalityVerifier:
    """
    Verifies inequalities on one point set, caching the exact quantities
    shared between checks (L_inf, L_inf*, lambda*_J and the Lq* bounds).
    """

    def __init__(self, D: PointSet, budget: Optional[SearchBudget] = None, p=None):
        self.D = D
        self.budget = budget or SearchBudget()
        self.p = to_rational(p) if p is not None else DEFAULT_INTERPOLATION_P
        self._linf: Optional[ExtremalResult] = None
        self._linf_star: Optional[ExtremalResult] = None
        self._lambda: Dict[IndexSubset, ExtremalResult] = {}
        self._lq_star: Dict[Tuple[Fraction, int], LqEstimate] = {}
        self._priority: Optional[List[ShiftVector]] = None

    # --- cached quantities ---

    def linf(self) -> ExtremalResult:
        if self._linf is None:
            self._linf = linf_exact(self.D, self.budget)
        return self._linf

    def linf_star(self) -> ExtremalResult:
        if self._linf_star is None:
            self._linf_star = linf_star_exact(self.D, self.budget)
        return self._linf_star

    def lambda_star(self, J: IndexSubset) -> ExtremalResult:
        if J not in self._lambda:
            self._lambda[J] = lambda_star(self.D, J, LambdaMode.ABS, self.budget)
        return self._lambda[J]

    def priority_shifts(self) -> List[ShiftVector]:
        """
        Shifts evaluated first by the Lq* search: the lambda* witness over all
        coordinates, then for every J the lambda*_J witness completed on the
        remaining coordinates (enough to certify lemma2 for that J)
        """
        if self._priority is None:
            shifts = []
            for J in reversed(IndexSubset.all_subsets(self.D.dim)):
                if not J:
                    continue
                try:
                    shift, _ = complete_shift(self.D, self.lambda_star(J).witness_shift, J, self.budget)
                except BudgetExceededError as e:
                    logger.debug(f"No priority shift for J={J}: {e}")
                    continue
                shifts.append(shift)
            self._priority = shifts
        return self._priority

    def lq_star(self, q: Fraction, step: int = 0) -> LqEstimate:
        """Certified lower bound of L_q* after `step` budget escalations"""
        key = (q, step)
        if key not in self._lq_star:
            budget = self.budget.escalated(step)
            try:
                linf_star = self.linf_star().value
            except BudgetExceededError:
                linf_star = None
            self._lq_star[key] = lq_star_lower(
                self.D, q, budget, linf_star=linf_star, priority=self.priority_shifts()
            )
        return self._lq_star[key]

    # --- individual inequalities ---

    def _lemma1(self) -> Verdict:
        linf = self.linf()
        total = Fraction(0)
        lambdas = {}
        for J in IndexSubset.all_subsets(self.D.dim):
            result = self.lambda_star(J)
            total += 2 ** len(J) * result.value
            lambdas[str(J)] = result.to_dict()
        return Verdict.decide(
            "lemma1",
            Bound(linf.value, note="Linf"),
            Bound(total, note="sum 2^|J| lambda*_J"),
            witnesses={"linf": linf.to_dict(), "lambda_star": lambdas},
        )

    def _decide_lower_rhs(self, name: str, lhs: Bound, rhs: Bound, rhs_upper: sp.Expr, **kwargs) -> Verdict:
        """Decide with a lower-bounded rhs; if that is inconclusive, try to certify a violation via the upper bound"""
        verdict = Verdict.decide(name, lhs, rhs, **kwargs)
        if verdict.status == VerdictStatus.INCONCLUSIVE:
            upper = Bound(rhs_upper, Direction.UPPER, note="upper bound via Linf*")
            violation = Verdict.decide(name, lhs, upper, **kwargs)
            if violation.status == VerdictStatus.VIOLATED:
                return violation
        return verdict

    def _lemma2(self, name: str, q: Fraction, J: IndexSubset, step: int) -> Verdict:
        d = self.D.dim
        power = len(J) - d if name == "lemma2" else d - len(J)
        lam = self.lambda_star(J)
        linf_star = self.linf_star()
        lq = self.lq_star(q, step)
        lhs = Bound(Fraction(2) ** power * lam.value, note=f"2^({power}) lambda*_J")
        rhs = Bound(lq.value(), Direction.LOWER, note="Lq* lower bound")
        return self._decide_lower_rhs(
            name, lhs, rhs, exact(linf_star.value), q=q, subset=str(J),
            witnesses={"lambda_star": lam.to_dict(), "lq_star_lower": lq.to_dict()},
        )

    def _lemma2_inf(self, J: IndexSubset) -> Verdict:
        # q = inf: both sides are exact, so the verdict is always decided
        power = len(J) - self.D.dim
        lam = self.lambda_star(J)
        linf_star = self.linf_star()
        return Verdict.decide(
            "lemma2_inf",
            Bound(Fraction(2) ** power * lam.value, note=f"2^({power}) lambda*_J"),
            Bound(linf_star.value, note="Linf*"),
            subset=str(J),
            witnesses={"lambda_star": lam.to_dict(), "linf_star": linf_star.to_dict()},
        )

    def _lemma3_left(self) -> Verdict:
        linf, linf_star = self.linf(), self.linf_star()
        return Verdict.decide(
            "lemma3_left",
            Bound(linf.value, note="Linf"),
            Bound(linf_star.value, note="Linf*"),
            witnesses={"linf": linf.to_dict(), "linf_star": linf_star.to_dict()},
        )

    def _lemma3_right(self) -> Verdict:
        linf, linf_star = self.linf(), self.linf_star()
        return Verdict.decide(
            "lemma3_right",
            Bound(linf_star.value, note="Linf*"),
            Bound(3 ** self.D.dim * linf.value, note="3^d Linf"),
            witnesses={"linf": linf.to_dict(), "linf_star": linf_star.to_dict()},
        )

    def _corollary_lower(self, q: Fraction) -> Verdict:
        linf, linf_star = self.linf(), self.linf_star()
        # Lq* <= Linf* for every q
        lhs = Bound(Fraction(1, 3 ** self.D.dim) * linf_star.value, Direction.UPPER, note="3^-d Lq* <= 3^-d Linf*")
        return Verdict.decide(
            "corollary_lower", lhs, Bound(linf.value, note="Linf"), q=q,
            witnesses={"linf": linf.to_dict(), "linf_star": linf_star.to_dict()},
        )

    def _corollary_upper(self, q: Fraction, step: int) -> Verdict:
        linf, linf_star = self.linf(), self.linf_star()
        lq = self.lq_star(q, step)
        constant = lev_constant(self.D.dim, q)
        return self._decide_lower_rhs(
            "corollary_upper",
            Bound(linf.value, note="Linf"),
            Bound(constant * lq.value(), Direction.LOWER, note=f"C_(d,q)={constant} times Lq* lower bound"),
            constant * exact(linf_star.value),
            q=q,
            witnesses={"linf": linf.to_dict(), "lq_star_lower": lq.to_dict()},
        )

    # --- dispatch ---

    def _evaluate(self, name: str, q: Optional[Fraction], J: Optional[IndexSubset], step: int) -> Verdict:
        if name == "lemma1":
            return self._lemma1()
        if name == "lemma2_inf":
            return self._lemma2_inf(J)
        if name in SUBSET_INEQUALITIES:
            return self._lemma2(name, q, J, step)
        if name == "lemma3_left":
            return self._lemma3_left()
        if name == "lemma3_right":
            return self._lemma3_right()
        if name == "corollary_lower":
            return self._corollary_lower(q)
        if name == "corollary_upper":
            return self._corollary_upper(q, step)
        if name == "interpolation":
            return interpolation_check(self.D, q, self.budget.escalated(step))
        if name == "interpolation_p":
            return interpolation_check_finite(self.D, q, self.p, self.budget.escalated(step))
        raise ValueError(f"Unknown inequality: {name}")

    def verify(self, name: str, q=None, subset: Optional[IndexSubset] = None) -> Verdict:
        """
        Verify one inequality instance

        Args:
            name: Inequality id
            q: Exponent for the q-dependent inequalities
            subset: J for lemma2 / lemma2_stated (defaults to [d])

        Returns:
            Verdict; budget overruns become INCONCLUSIVE with diagnostics
        """
        if name not in INEQUALITY_IDS:
            raise ValueError(f"Unknown inequality: {name}")
        q = to_rational(q) if q is not None else None
        if not applicable(name, q):
            raise ValueError(f"{name} is not stated for q={q}")
        if name in SUBSET_INEQUALITIES and subset is None:
            subset = IndexSubset.full(self.D.dim)
        subset_label = str(subset) if name in SUBSET_INEQUALITIES else None
        q_label = q if name in Q_INEQUALITIES else None
        p_label = self.p if name == "interpolation_p" else None

        steps = self.budget.escalations + 1 if name in ESCALATING else 1
        verdict = None
        for step in range(steps):
            try:
                verdict = self._evaluate(name, q, subset, step)
            except BudgetExceededError as e:
                verdict = Verdict.inconclusive(name, str(e), q=q_label, subset=subset_label, p=p_label)
                break
            if verdict.status != VerdictStatus.INCONCLUSIVE:
                break
            if step + 1 < steps:
                logger.warning(f"{verdict.key} inconclusive on {self.D!r}; escalating shift budget")

        if verdict.status == VerdictStatus.VIOLATED:
            logger.error(f"{verdict.key} VIOLATED on {self.D!r} (margin {verdict.margin})")
        elif verdict.status == VerdictStatus.INCONCLUSIVE:
            logger.warning(f"{verdict.key} INCONCLUSIVE on {self.D!r}")
            if not verdict.diagnostics:
                verdict.diagnostics = "certified bounds do not separate the two sides"
        return verdict

    def verify_all(self, names: Sequence[str], qs: Sequence[Fraction]) -> List[Verdict]:
        """Every applicable (inequality, q, J) instance, in a fixed order"""
        verdicts = []
        for name in names:
            if name not in Q_INEQUALITIES:
                if name in SUBSET_INEQUALITIES:
                    subsets = [J for J in IndexSubset.all_subsets(self.D.dim) if J]
                    verdicts.extend(self.verify(name, subset=J) for J in subsets)
                else:
                    verdicts.append(self.verify(name))
                continue
            for q in qs:
                if not applicable(name, q):
                    continue
                if name in SUBSET_INEQUALITIES:
                    for J in IndexSubset.all_subsets(self.D.dim):
                        if J:
                            verdicts.append(self.verify(name, q, J))
                else:
                    verdicts.append(self.verify(name, q))
        return verdicts


def verify(name: str, D: PointSet, q=None, budget: Optional[SearchBudget] = None,
           subset: Optional[IndexSubset] = None, p=None) -> Verdict:
    """Verify a single inequality on D"""
    return InequalityVerifier(D, budget, p).verify(name, q, subset)
