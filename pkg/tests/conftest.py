import pytest

from weylflow import fixtures
from weylflow.verify import context_for


@pytest.fixture(scope="session")
def contexts():
    """Shared per-fixture caches so germ tables are built once per run."""
    return {
        name: context_for(name, fixtures.load_fixture(name))
        for name in fixtures.FIXTURES
    }


@pytest.fixture(scope="session")
def k33(contexts):
    return contexts["k33"]


@pytest.fixture(scope="session")
def q3(contexts):
    return contexts["q3"]


@pytest.fixture(scope="session")
def biregular(contexts):
    return contexts["biregular"]


@pytest.fixture(scope="session")
def a2(contexts):
    return contexts["a2q2"]
