import logging

from core.verify import InequalityVerifier, lev_constant
from core.scalar import format_exact, is_exact_rational, render_float
from controllers.common import resolve_point_set
from models.config import RunConfig
from models.report import Report

logger = logging.getLogger("verify_controller")


def cmd_verify(config: RunConfig) -> Report:
    """Verdicts for every requested inequality and exponent, plus the C_{d,q} table"""
    point_set = resolve_point_set(config)
    report = Report("verify", config)
    for q in config.q_values:
        constant = lev_constant(point_set.dim, q)
        text = format_exact(constant)
        if not is_exact_rational(constant):
            text += f" ~ {render_float(constant)}"
        report.constants[f"C_{{{point_set.dim},{q}}}"] = text

    verifier = InequalityVerifier(point_set, config.budget, config.p_value)
    report.add_verdicts(verifier.verify_all(config.inequalities, config.q_values))
    logger.info(
        f"{point_set!r}: {len(report.verdicts)} verdicts, "
        f"{report.violations} violated, {report.warnings} inconclusive"
    )
    return report
