import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from generators.sequences import gen_hammersley, gen_korobov, gen_random, gen_van_der_corput  # noqa: E402
from models.geometry import PointSet  # noqa: E402


@pytest.fixture
def single_point():
    return PointSet(1, [["1/2"]], label="single")


@pytest.fixture
def korobov_5():
    return gen_korobov(5, 2, 2)


@pytest.fixture
def vdc_8():
    return gen_van_der_corput(8)


@pytest.fixture
def hammersley_8():
    return gen_hammersley(8, 2)


@pytest.fixture
def random_small():
    return gen_random(6, 2, 16, seed=11)


@pytest.fixture
def corpus(korobov_5, vdc_8, hammersley_8, random_small):
    return [korobov_5, vdc_8, hammersley_8, random_small]
