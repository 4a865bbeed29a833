import pytest

from smallgen.sievelab import primes_upto


@pytest.fixture(scope="session")
def small_primes():
    return [int(p) for p in primes_upto(1000) if p >= 3]
