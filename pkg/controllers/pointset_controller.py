import logging
from fractions import Fraction

from core.errors import ConfigError
from core.kernel import set_identity_rhs, set_L
from core.rng import CounterRNG
from core.scalar import SidedValue, Side, format_rational
from controllers.common import resolve_point_set
from dao.pointset_dao import PointSetDAO
from models.config import RunConfig
from models.geometry import Anchor
from models.report import Report

logger = logging.getLogger("pointset_controller")

ANCHOR_DENOMINATOR = 64
FAULT = Fraction(1, 1 << 20)


def cmd_gen(config: RunConfig) -> Report:
    """Generate a point set; the report document is the point set JSON"""
    point_set = resolve_point_set(config)
    report = Report("gen", config)
    report.document = PointSetDAO.to_json(point_set)
    return report


def _evaluate(point_set, anchor: Anchor) -> dict:
    lhs = set_L(point_set, anchor)
    rhs = set_identity_rhs(point_set, anchor)
    return {
        "anchor": anchor.to_dict(),
        "set_L": format_rational(lhs),
        "identity_rhs": format_rational(rhs),
        "match": lhs == rhs,
    }


def cmd_eval(config: RunConfig) -> Report:
    """Local discrepancy and Main Identity rhs at the anchors given with --anchor"""
    if not config.anchor:
        raise ConfigError("eval needs at least one --anchor")
    point_set = resolve_point_set(config)
    report = Report("eval", config)
    for text in config.anchor:
        anchor = Anchor.parse(text)
        if anchor.dim != point_set.dim:
            raise ConfigError(f"Anchor {text!r} has dimension {anchor.dim}, point set has {point_set.dim}")
        item = _evaluate(point_set, anchor)
        report.add_item(item)
        if not item["match"]:
            report.failures += 1
    return report


def sample_anchors(dim: int, count: int, seed: int):
    """
    Seeded anchors: the origin, the unit corner, then random k/64 coordinates
    with random side flags
    """
    rng = CounterRNG(seed)
    fixed = [Anchor.zeros(dim), Anchor.ones(dim)]
    for anchor in fixed[:count]:
        yield anchor
    for s in range(max(count - len(fixed), 0)):
        coords = []
        for j in range(dim):
            counter = 2 * (s * dim + j)
            value = Fraction(rng.randbelow(counter, ANCHOR_DENOMINATOR + 1), ANCHOR_DENOMINATOR)
            side = Side(rng.randbelow(counter + 1, 3) - 1)
            if (value == 0 and side == Side.LEFT_LIMIT) or (value == 1 and side == Side.RIGHT_LIMIT):
                side = Side.AT
            coords.append(SidedValue(value, side))
        yield Anchor(coords)


def cmd_identity(config: RunConfig) -> Report:
    """Check the Main Identity set_L == set_identity_rhs over seeded anchors"""
    point_set = resolve_point_set(config)
    report = Report("identity", config)
    matches = mismatches = 0
    first_mismatch = None
    for k, anchor in enumerate(sample_anchors(point_set.dim, config.anchors, config.seed)):
        lhs = set_L(point_set, anchor)
        rhs = set_identity_rhs(point_set, anchor)
        if config.inject_fault and k == 0:
            rhs += FAULT
        if lhs == rhs:
            matches += 1
        else:
            mismatches += 1
            if first_mismatch is None:
                first_mismatch = {
                    "anchor": anchor.to_dict(),
                    "set_L": format_rational(lhs),
                    "identity_rhs": format_rational(rhs),
                }
    if mismatches:
        logger.error(f"Main Identity failed at {mismatches} of {matches + mismatches} anchors")
    report.failures = mismatches
    report.add_item({
        "point_set": repr(point_set),
        "anchors": matches + mismatches,
        "matches": matches,
        "mismatches": mismatches,
        "first_mismatch": first_mismatch,
    })
    return report
