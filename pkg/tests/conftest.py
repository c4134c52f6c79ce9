import pytest

from qisom import QMatrix, TruncatedFock


@pytest.fixture(scope="session")
def q2() -> QMatrix:
    return QMatrix.random(2, seed=42)


@pytest.fixture(scope="session")
def q3() -> QMatrix:
    return QMatrix.random(3, seed=5)


@pytest.fixture(scope="session")
def zero2() -> QMatrix:
    return QMatrix.zero(2)


@pytest.fixture(scope="session")
def t4(q2) -> TruncatedFock:
    # shared truncation; operator caches persist across tests
    return TruncatedFock(q2, 4)


@pytest.fixture(scope="session")
def t6(q2) -> TruncatedFock:
    return TruncatedFock(q2, 6)
