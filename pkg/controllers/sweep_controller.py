import logging
import time
from typing import Dict, List, Tuple

from joblib import Parallel, delayed

from core.errors import BudgetExceededError, ConfigError, DiscrepancyError
from core.scalar import format_exact, format_rational, render_float
from core.verify import Q_INEQUALITIES, InequalityVerifier
from core.lq_norms import lq_numeric
from controllers.lq_controller import exact_lq
from generators.factory import PointSetFactory
from models.config import RunConfig
from models.report import Report
from models.results import Verdict

logger = logging.getLogger("sweep_controller")

Row = Dict[str, str]


def _join(verdicts: List[Verdict]) -> Tuple[str, str]:
    statuses = ";".join(f"{v.key}={v.status.value}" for v in verdicts)
    margins = ";".join(
        f"{v.key}={format_rational(v.margin)}" for v in verdicts if v.margin is not None
    )
    return statuses, margins


def sweep_point(task: Tuple[RunConfig, int]) -> Tuple[List[Row], List[Verdict]]:
    """
    Rows of one sweep size, one per exponent

    Runs in a worker process when --jobs > 1, so it takes and returns only
    picklable values. Errors are written into the rows instead of raised.
    """
    config, n = task
    sweep = config.sweep
    started = time.perf_counter()
    base = {"family": sweep.family.value, "n": str(n), "d": str(sweep.d)}
    try:
        factory = PointSetFactory(defaults={"seed": config.seed})
        point_set = factory.create(factory.spec_from({**sweep.params, "kind": sweep.family, "n": n, "d": sweep.d}))
    except (DiscrepancyError, ValueError, OSError) as e:
        logger.error(f"Sweep point n={n} failed: {e}")
        return [{**base, "q": format_rational(q), "error": str(e)} for q in config.q_values], []

    verifier = InequalityVerifier(point_set, config.budget, config.p_value)
    errors: List[str] = []
    linf = linf_star = ""
    try:
        linf = format_rational(verifier.linf().value)
    except BudgetExceededError as e:
        errors.append(str(e))
    try:
        linf_star = format_rational(verifier.linf_star().value)
    except BudgetExceededError as e:
        errors.append(str(e))

    q_free = [name for name in config.inequalities if name not in Q_INEQUALITIES]
    q_dependent = [name for name in config.inequalities if name in Q_INEQUALITIES]
    shared = verifier.verify_all(q_free, [])
    verdicts = list(shared)

    rows = []
    for q in config.q_values:
        row_errors = list(errors)
        row = {**base, "q": format_rational(q), "linf": linf, "linf_star": linf_star}
        try:
            exact = exact_lq(point_set, q, config.budget)
            if exact is not None:
                row["lq_pow_q"] = format_exact(exact.value_pow_q)
                row["lq_float"] = render_float(exact.value_float)
            else:
                row["lq_float"] = render_float(lq_numeric(point_set, q, config.mc_samples, config.seed).value_float)
        except BudgetExceededError as e:
            row_errors.append(str(e))
        try:
            row["lq_star_lower_pow_q"] = format_exact(verifier.lq_star(q).value_pow_q)
        except BudgetExceededError as e:
            row_errors.append(str(e))

        own = verifier.verify_all(q_dependent, [q])
        verdicts.extend(own)
        row["verdicts"], row["margins"] = _join(shared + own)
        row["error"] = "; ".join(row_errors)
        rows.append(row)

    if config.timing:
        elapsed = f"{time.perf_counter() - started:.6f}"
        for row in rows:
            row["runtime"] = elapsed
    logger.info(f"Sweep point {point_set!r} done")
    return rows, verdicts


def cmd_sweep(config: RunConfig) -> Report:
    """
    Run a generator family over its sizes; one CSV row per (size, q)

    Rows come back in the order of sweep.n_values regardless of --jobs.
    """
    if config.sweep is None:
        raise ConfigError("sweep needs a sweep section in --config")
    report = Report("sweep", config)
    started = time.perf_counter()
    tasks = [(config, n) for n in config.sweep.n_values]
    if config.jobs > 1:
        results = Parallel(n_jobs=config.jobs)(delayed(sweep_point)(task) for task in tasks)
    else:
        results = [sweep_point(task) for task in tasks]

    for rows, verdicts in results:
        report.rows.extend(rows)
        report.add_verdicts(verdicts)
    if config.timing:
        report.timing = {"total_seconds": round(time.perf_counter() - started, 6)}
    failed = sum(1 for row in report.rows if row.get("error"))
    if failed:
        logger.warning(f"{failed} sweep rows carry errors")
    logger.info(f"Sweep of {config.sweep.family.value}: {len(report.rows)} rows")
    return report
