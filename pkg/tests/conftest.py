"""共享夹具：常用特征群与筛表只构建一次。"""
"""EN: Shared fixtures; common character groups and sieves are built once per session."""

import numpy as np
import pytest

from resonance.arith import sieve
from resonance.characters import CharacterGroup


@pytest.fixture(scope="session")
def group7():
    return CharacterGroup.build(7)


@pytest.fixture(scope="session")
def group101():
    return CharacterGroup.build(101)


@pytest.fixture(scope="session")
def group1009():
    return CharacterGroup.build(1009)


@pytest.fixture(scope="session")
def table():
    return sieve(10**5)


@pytest.fixture(scope="session")
def big_table():
    return sieve(10**6)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
