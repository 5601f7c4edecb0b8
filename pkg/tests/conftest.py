import numpy as np
import pytest

from mpmech.sl2c import builtin_pairs


@pytest.fixture(scope="session")
def pairs():
    return builtin_pairs()


@pytest.fixture(scope="session")
def sl2c_derived(pairs):
    return pairs["sl2c_derived"]


@pytest.fixture(scope="session")
def sl2c_printed(pairs):
    return pairs["sl2c_printed"]


@pytest.fixture(scope="session")
def e3_heavytop(pairs):
    return pairs["e3_heavytop"]


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
