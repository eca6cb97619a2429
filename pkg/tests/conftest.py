import random

import pytest

from gradcons import TypeGraph, cra


@pytest.fixture(scope="session")
def fixtures():
    return cra.load_fixtures()


@pytest.fixture(scope="session")
def tg2():
    """Two node types, one cross edge type, one loop-capable edge type."""
    return TypeGraph(["A", "B"], [("ab", "A", "B"), ("aa", "A", "A")])


@pytest.fixture
def rng():
    return random.Random(20260823)
