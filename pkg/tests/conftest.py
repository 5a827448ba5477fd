import numpy as np
import pytest

from hardylab import catalog
from hardylab.constants import ConstantRegistry, quadratic_surd_registry


@pytest.fixture(scope="session")
def reg_plain():
    return ConstantRegistry()


@pytest.fixture(scope="session")
def reg_sqrt2():
    return quadratic_surd_registry(2)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def example1():
    return catalog.example1_family()


@pytest.fixture(scope="session")
def example2():
    return catalog.example2_family()


@pytest.fixture(scope="session")
def example8():
    return catalog.example8_family()
