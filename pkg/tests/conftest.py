import random

import pytest

from polymat.matroid import catalog


@pytest.fixture(scope="session")
def v8():
    return catalog("V8")


@pytest.fixture(scope="session")
def p3():
    return catalog("P3")


@pytest.fixture(scope="session")
def tictactoe():
    return catalog("tictactoe")


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
