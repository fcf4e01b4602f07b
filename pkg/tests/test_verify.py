from fractions import Fraction

import pytest

from core.scalar import is_exact_rational, to_fraction
from core.verify import InequalityVerifier, applicable, lev_constant, verify
from models.config import SearchBudget
from models.geometry import IndexSubset, PointSet
from models.results import Bound, Direction, Verdict, VerdictStatus

Q_VALUES = [Fraction(1), Fraction(2), Fraction(4)]
CERTIFIED = ["lemma1", "lemma2", "lemma3_left", "lemma3_right", "corollary_lower"]


@pytest.mark.parametrize(
    "d, q, expected",
    [
        (1, 1, Fraction(5, 2)),
        (2, 1, Fraction(25, 4)),
        (3, 2, Fraction(125, 8)),
        (1, Fraction(1, 2), Fraction(75, 4)),
        (2, Fraction(1, 2), Fraction(5 ** 4 * 9, 2 ** 4)),
    ],
)
def test_lev_constant_rational_cases(d, q, expected):
    constant = lev_constant(d, q)
    assert is_exact_rational(constant)
    assert to_fraction(constant) == expected


def test_lev_constant_irrational_case():
    constant = lev_constant(1, Fraction(2, 3))
    assert not is_exact_rational(constant)
    assert float(constant) == pytest.approx(2.5 ** 1.5 * 3 ** 0.5, rel=1e-12)


@pytest.mark.parametrize("d, q", [(0, 1), (2, 0), (2, -1)])
def test_lev_constant_rejects_bad_arguments(d, q):
    with pytest.raises(ValueError):
        lev_constant(d, q)


def test_applicable():
    assert applicable("lemma1", None)
    assert applicable("lemma2", Fraction(1))
    assert not applicable("lemma2", Fraction(1, 2))
    assert applicable("interpolation", Fraction(1, 2))
    assert applicable("interpolation", Fraction(1))
    assert not applicable("interpolation", Fraction(2))
    assert applicable("interpolation_p", Fraction(1, 2))
    assert not applicable("interpolation_p", Fraction(1))
    assert applicable("lemma2_inf", None)
    assert applicable("corollary_upper", Fraction(1, 3))


def test_decide_semantics():
    holds = Verdict.decide("x", Bound(1), Bound(1))
    assert holds.status == VerdictStatus.HOLDS
    assert holds.margin == 0

    violated = Verdict.decide("x", Bound(2, Direction.LOWER), Bound(1, Direction.UPPER))
    assert violated.status == VerdictStatus.VIOLATED
    assert violated.margin == -1

    # an upper bound above the rhs proves nothing
    unclear = Verdict.decide("x", Bound(2, Direction.UPPER), Bound(1))
    assert unclear.status == VerdictStatus.INCONCLUSIVE

    lower_rhs = Verdict.decide("x", Bound(1), Bound(3, Direction.LOWER))
    assert lower_rhs.status == VerdictStatus.HOLDS
    assert lower_rhs.margin == 2


def test_verdict_key():
    verdict = Verdict("lemma2", VerdictStatus.HOLDS, q=Fraction(2), subset="{1,2}")
    assert verdict.key == "lemma2{1,2}@q=2"
    assert Verdict("lemma1", VerdictStatus.HOLDS).key == "lemma1"


def test_single_point_chain(single_point):
    verifier = InequalityVerifier(single_point)
    names = CERTIFIED + ["lemma2_inf", "corollary_upper", "interpolation", "interpolation_p"]
    verdicts = verifier.verify_all(names, Q_VALUES + [Fraction(1, 2)])
    assert verdicts
    assert all(v.status == VerdictStatus.HOLDS for v in verdicts), [v for v in verdicts if v.status != VerdictStatus.HOLDS]
    assert all(v.margin >= 0 for v in verdicts)


def test_one_dimensional_corpus(vdc_8):
    verifier = InequalityVerifier(vdc_8)
    verdicts = verifier.verify_all(CERTIFIED + ["corollary_upper"], Q_VALUES)
    assert all(v.status == VerdictStatus.HOLDS for v in verdicts)


def test_two_dimensional_corpus(korobov_5, hammersley_8, random_small):
    for D in (korobov_5, hammersley_8, random_small):
        verdicts = InequalityVerifier(D).verify_all(CERTIFIED, Q_VALUES)
        lemma2 = [v for v in verdicts if v.inequality == "lemma2"]
        assert len(lemma2) == 3 * len(Q_VALUES)
        assert all(v.status == VerdictStatus.HOLDS for v in verdicts)


def test_lemma1_sum(korobov_5):
    verdict = verify("lemma1", korobov_5)
    assert verdict.status == VerdictStatus.HOLDS
    assert set(verdict.witnesses["lambda_star"]) == {"{}", "{1}", "{2}", "{1,2}"}


def test_stated_lemma2_constant_is_never_certified():
    # a point at the origin: 2 * lambda*_{1} = 1 while L_1* = 3/4
    D = PointSet(2, [[0, 0]])
    J = IndexSubset(2, [1])
    assert verify("lemma2", D, 1, subset=J).status == VerdictStatus.HOLDS
    assert verify("lemma2_stated", D, 1, subset=J).status != VerdictStatus.HOLDS


def test_tiny_budget_is_inconclusive(single_point):
    budget = SearchBudget(shift_evaluations=1, escalations=0)
    verdict = verify("lemma2", single_point, 2, budget)
    assert verdict.status == VerdictStatus.INCONCLUSIVE
    assert verdict.diagnostics


def test_escalation_recovers_from_tiny_budget(single_point):
    budget = SearchBudget(shift_evaluations=1, escalations=2)
    assert verify("lemma2", single_point, 2, budget).status == VerdictStatus.HOLDS


def test_budget_overrun_becomes_inconclusive(korobov_5):
    verdict = verify("lemma3_left", korobov_5, budget=SearchBudget(linf_candidates=1))
    assert verdict.status == VerdictStatus.INCONCLUSIVE
    assert "linf_exact" in verdict.diagnostics


def test_unknown_or_inapplicable_inequality(single_point):
    with pytest.raises(ValueError):
        verify("lemma9", single_point)
    with pytest.raises(ValueError):
        verify("interpolation", single_point, 2)


def test_lemma2_at_infinity_is_always_decided(corpus):
    for D in corpus:
        verdicts = InequalityVerifier(D).verify_all(["lemma2_inf"], [])
        assert len(verdicts) == 2 ** D.dim - 1
        assert all(v.status == VerdictStatus.HOLDS for v in verdicts)
        assert all(v.lhs.direction == Direction.EXACT and v.rhs.direction == Direction.EXACT for v in verdicts)


def test_lemma2_at_infinity_on_one_point():
    # 2^-1 * lambda*_{1} = 1/4 against L_inf* = 1
    D = PointSet(2, [[0, 0]])
    verdict = verify("lemma2_inf", D, subset=IndexSubset(2, [1]))
    assert verdict.key == "lemma2_inf{1}"
    assert verdict.margin == Fraction(3, 4)


def test_finite_interpolation_through_the_verifier(single_point):
    verifier = InequalityVerifier(single_point, p=4)
    verdicts = verifier.verify_all(["interpolation_p"], [Fraction(1, 2), Fraction(2)])
    assert [v.key for v in verdicts] == ["interpolation_p@q=1/2,p=4"]
    assert verdicts[0].status == VerdictStatus.HOLDS
    assert verdicts[0].to_dict()["p"] == "4/1"
