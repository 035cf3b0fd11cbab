import pytest

from tomlinks.algebra import Ring, parse
from tomlinks.birational import Basket, FanoCase
from tomlinks.casefile import load_bundled
from tomlinks.pfaffian import SkewMatrix5, TomFormat, WeightMatrix5


@pytest.fixture(scope="session")
def case_10985() -> FanoCase:
    return load_bundled("10985").to_fano_case()


@pytest.fixture(scope="session")
def case_20652() -> FanoCase:
    return load_bundled("20652").to_fano_case()


@pytest.fixture(scope="session")
def case_24097() -> FanoCase:
    return load_bundled("24097").to_fano_case()


@pytest.fixture(scope="session")
def ring_10985() -> Ring:
    return Ring(("x1", "x2", "x3", "y1", "y2", "y3", "y4"), [(1, 1, 1, 6, 5, 4, 3)])
