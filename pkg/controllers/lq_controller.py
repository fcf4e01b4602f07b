import logging
from fractions import Fraction
from typing import Any, Dict, Optional

from core.errors import BudgetExceededError
from core.lq_norms import l2_warnock, lq_exact_even, lq_numeric, lq_power_1d, lq_star_lower
from core.scalar import exact, exact_power, format_rational
from controllers.common import error_item, resolve_point_set
from models.config import RunConfig, SearchBudget
from models.geometry import PointSet
from models.report import Report
from models.results import EstimateKind, LqEstimate

logger = logging.getLogger("lq_controller")


def exact_lq(point_set: PointSet, q: Fraction, budget: SearchBudget) -> Optional[LqEstimate]:
    """
    Exact L_q when a closed form is available: even integer q in any
    dimension, every rational q for d = 1. None otherwise.
    """
    if point_set.dim == 1:
        value = lq_power_1d(point_set, q)
    elif q.denominator == 1 and q.numerator % 2 == 0:
        value = lq_exact_even(point_set, q, budget)
    else:
        return None
    pow_q = exact(value)
    return LqEstimate(q, EstimateKind.EXACT, float(exact_power(pow_q, 1 / q)), value_pow_q=pow_q)


def lq_item(point_set: PointSet, q: Fraction, config: RunConfig) -> Dict[str, Any]:
    item: Dict[str, Any] = {"q": format_rational(q)}
    try:
        closed = exact_lq(point_set, q, config.budget)
        item["exact"] = closed.to_dict() if closed else None
    except BudgetExceededError as e:
        item["exact"] = error_item(f"lq_exact q={q}", e)
    if q == 2:
        item["warnock_pow_2"] = format_rational(l2_warnock(point_set))
    item["monte_carlo"] = lq_numeric(point_set, q, config.mc_samples, config.seed).to_dict()
    try:
        item["star_lower"] = lq_star_lower(point_set, q, config.budget).to_dict()
    except BudgetExceededError as e:
        item["star_lower"] = error_item(f"lq_star_lower q={q}", e)
    return item


def cmd_lq(config: RunConfig) -> Report:
    """Exact, Monte Carlo and shift-lower-bound Lq values for every --q"""
    point_set = resolve_point_set(config)
    report = Report("lq", config)
    for q in config.q_values:
        report.add_item(lq_item(point_set, q, config))
    return report
