from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.errors import ConfigError, DimensionMismatchError, GeneratorError
from generators.factory import PointSetFactory
from generators.sequences import (
    apply_shift,
    gen_hammersley,
    gen_korobov,
    gen_random,
    gen_van_der_corput,
    radical_inverse,
)
from models.config import GeneratorKind
from models.geometry import PointSet
from tests.strategies import grid_values, point_sets


def F(text):
    return Fraction(text)


def test_korobov_points():
    D = gen_korobov(5, 2, 2)
    expected = PointSet(2, [[0, 0], ["1/5", "2/5"], ["2/5", "4/5"], ["3/5", "1/5"], ["4/5", "3/5"]])
    assert D == expected
    assert D.label == "korobov(n=5,a=2,d=2)"


@pytest.mark.parametrize("n, a", [(5, 5), (5, 0), (1, 1)])
def test_korobov_rejects_bad_parameters(n, a):
    with pytest.raises(GeneratorError):
        gen_korobov(n, a, 2)


def test_van_der_corput_points():
    assert gen_van_der_corput(4).column(0) == (0, F("1/2"), F("1/4"), F("3/4"))
    assert gen_van_der_corput(4, base=3).column(0) == (0, F("1/3"), F("2/3"), F("1/9"))


def test_radical_inverse():
    # 6 = 110 in base 2
    assert radical_inverse(6, 2) == F("3/8")
    assert radical_inverse(0, 5) == 0


def test_hammersley_points():
    D = gen_hammersley(4, 2)
    assert [tuple(p) for p in D] == [(0, 0), (F("1/4"), F("1/2")), (F("1/2"), F("1/4")), (F("3/4"), F("3/4"))]


def test_hammersley_default_bases_are_primes():
    D = gen_hammersley(6, 4)
    assert D.label == "hammersley(n=6,d=4,bases=2/3/5)"


def test_hammersley_rejects_shared_factors():
    with pytest.raises(GeneratorError):
        gen_hammersley(8, 3, [2, 4])
    with pytest.raises(GeneratorError):
        gen_hammersley(8, 3, [2])


def test_random_is_seeded():
    a = gen_random(10, 3, 32, seed=4)
    assert a == gen_random(10, 3, 32, seed=4)
    assert a.N == 10 and a.dim == 3
    assert all(c.denominator <= 32 and 32 % c.denominator == 0 for p in a for c in p)


def test_shifting_a_lattice_by_one_of_its_points(korobov_5):
    shifted = apply_shift(korobov_5, [F("1/5"), F("2/5")])
    assert shifted == korobov_5


def test_shift_wraps_residues():
    D = apply_shift(PointSet(1, [["3/4"]]), [F("1/2")])
    assert D.column(0) == (F("1/4"),)


def test_shift_dimension_mismatch(korobov_5):
    with pytest.raises(DimensionMismatchError):
        apply_shift(korobov_5, [F("1/2")])


def test_parse_spec():
    params = PointSetFactory.parse_spec("hammersley:n=8,d=3,bases=2/3")
    assert params == {"kind": GeneratorKind.HAMMERSLEY, "n": 8, "d": 3, "bases": [2, 3]}
    assert PointSetFactory.parse_spec("vdc:n=4")["kind"] == GeneratorKind.VAN_DER_CORPUT


@pytest.mark.parametrize("text", ["sobol:n=4", "korobov:n=5,a", "korobov:n=five"])
def test_parse_spec_rejects_garbage(text):
    with pytest.raises(ConfigError):
        PointSetFactory.parse_spec(text)


def test_factory_builds_each_family():
    factory = PointSetFactory()
    assert factory.create_from_string("korobov:n=5,d=2") == gen_korobov(5, 2, 2)
    assert factory.create_from_string("vdc:n=4") == gen_van_der_corput(4)
    assert factory.create_from_string("hammersley:n=4,d=2") == gen_hammersley(4, 2)
    assert factory.create_from_string("random:n=3,d=2,denominator=8,seed=2") == gen_random(3, 2, 8, 2)


def test_factory_defaults_fill_missing_parameters():
    factory = PointSetFactory(defaults={"seed": 9})
    spec = factory.spec_from({"kind": "random", "n": 4, "d": 2})
    assert spec.seed == 9


def test_factory_missing_size_is_a_config_error():
    with pytest.raises(ConfigError):
        PointSetFactory().create_from_string("korobov:d=2")


def test_van_der_corput_is_one_dimensional():
    with pytest.raises(GeneratorError):
        PointSetFactory().create_from_string("vdc:n=4,d=2")


def test_explicit_points_from_a_file(tmp_path):
    path = tmp_path / "points.json"
    path.write_text('{"dim": 2, "points": [["0/1", "0/1"], ["1/2", "1/3"]]}', encoding="utf-8")
    D = PointSetFactory().create_from_string(f"explicit:path={path}")
    assert D == PointSet(2, [[0, 0], ["1/2", "1/3"]])


def test_generator_files(tmp_path):
    mapping = tmp_path / "gen.json"
    mapping.write_text('{"kind": "hammersley", "n": 4, "d": 2}', encoding="utf-8")
    nested = tmp_path / "run.yaml"
    nested.write_text('generator: "korobov:n=5,d=2"\n', encoding="utf-8")
    factory = PointSetFactory()
    assert PointSetFactory.is_spec_file(str(nested))
    assert not PointSetFactory.is_spec_file("korobov:n=5")
    assert factory.create_from_file(str(mapping)) == gen_hammersley(4, 2)
    assert factory.create_from_file(str(nested)) == gen_korobov(5, 2, 2)


def test_generator_file_without_a_mapping(tmp_path):
    path = tmp_path / "gen.yaml"
    path.write_text("generator: [1, 2]\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        PointSetFactory.parse_file(str(path))


@settings(max_examples=40, deadline=None)
@given(point_sets(max_dim=3, max_points=4), st.data())
def test_shifts_act_as_a_group(D, data):
    a = data.draw(st.lists(grid_values(), min_size=D.dim, max_size=D.dim))
    b = data.draw(st.lists(grid_values(), min_size=D.dim, max_size=D.dim))
    assert apply_shift(apply_shift(D, a), b) == apply_shift(D, [x + y for x, y in zip(a, b)])
    assert apply_shift(D, [0] * D.dim) == D
    assert apply_shift(apply_shift(D, a), [-x for x in a]) == D
