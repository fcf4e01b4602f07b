import logging

from core.errors import BudgetExceededError
from core.extremal import LambdaMode, lambda_star, linf_exact, linf_star_exact
from core.lq_norms import l1_star_exact_1d
from controllers.common import error_item, resolve_point_set
from models.config import RunConfig
from models.geometry import IndexSubset
from models.report import Report

logger = logging.getLogger("extremal_controller")


def cmd_extremal(config: RunConfig) -> Report:
    """
    L_inf, L_inf* and lambda*_J (both modes, every nonempty J) of one point set

    A search that exceeds its budget is reported as an item error; the other
    quantities are still computed.
    """
    point_set = resolve_point_set(config)
    budget = config.budget
    report = Report("extremal", config)

    searches = [
        ("linf", lambda: linf_exact(point_set, budget)),
        ("linf_star", lambda: linf_star_exact(point_set, budget)),
    ]
    for J in IndexSubset.all_subsets(point_set.dim):
        if not J:
            continue
        for mode in LambdaMode:
            searches.append(
                (f"lambda_star{J}[{mode.value}]", lambda J=J, mode=mode: lambda_star(point_set, J, mode, budget))
            )
    if point_set.dim == 1:
        searches.append(("l1_star", lambda: l1_star_exact_1d(point_set)))

    for quantity, search in searches:
        try:
            result = search()
        except BudgetExceededError as e:
            report.add_item(error_item(quantity, e))
            continue
        item = result.to_dict()
        item["quantity"] = quantity
        report.add_item(item)
    return report
