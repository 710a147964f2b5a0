import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import cmolab.arith as arith  # noqa: E402


@pytest.fixture(scope="session")
def table_1e4():
    return arith.sieve_primes(10**4)


@pytest.fixture(scope="session")
def table_1e5():
    return arith.sieve_primes(10**5)


@pytest.fixture(scope="session")
def table_1e6():
    return arith.sieve_primes(10**6)


@pytest.fixture(scope="session")
def table_1e7():
    return arith.sieve_primes(10**7)
