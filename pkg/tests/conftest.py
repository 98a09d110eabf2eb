import pytest

from katailab.sieve import FactorSieve


@pytest.fixture(scope="session")
def sieve_small():
    return FactorSieve.build(10_000)


@pytest.fixture(scope="session")
def sieve_mid():
    return FactorSieve.build(100_000)


@pytest.fixture(scope="session")
def sieve_big():
    # shared by the heavy empirical tests and the acceptance suite
    return FactorSieve.build(10_000_000)
