import random

import pytest

from coxgrowth import fixtures
from coxgrowth.diagram import as_coxeter, random_spanned_diagram

RANDOM_SEED = 2024
RANDOM_COUNT = 25


def random_set(seed=RANDOM_SEED, count=RANDOM_COUNT):
    """The fixed random family: infinity-spanned, rank 3-5, finite labels 2-5 plus inf."""
    rng = random.Random(seed)
    return [random_spanned_diagram(rng, rng.randint(3, 5)) for _ in range(count)]


def fixture_diagrams():
    return {name: as_coxeter(fixtures.load(name)) for name in fixtures.names()}


@pytest.fixture(scope="session")
def random_diagrams():
    return random_set()


@pytest.fixture(scope="session")
def fixture_map():
    return fixture_diagrams()
