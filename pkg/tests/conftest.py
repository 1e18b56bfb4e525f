import pytest

from smoothdiv import oracle, special


@pytest.fixture(scope="session")
def dickman():
    return special.default_dickman()


@pytest.fixture(scope="session")
def buchstab():
    return special.default_buchstab()


@pytest.fixture(scope="session")
def sieve_small():
    return oracle.build_sieve(10**5)


@pytest.fixture(scope="session")
def sieve_1m():
    return oracle.build_sieve(10**6)


@pytest.fixture(scope="session")
def sieve_10m():
    return oracle.build_sieve(10**7)
