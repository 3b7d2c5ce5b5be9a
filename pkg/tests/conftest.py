import pytest

from cubecensus.census import run_census
from cubecensus.enumeration import enumerate_canonical


@pytest.fixture(scope="session")
def canonical_classes():
    return enumerate_canonical(opposite_only=False)


@pytest.fixture(scope="session")
def full_census():
    return run_census(opposite_only=False)


@pytest.fixture(scope="session")
def manifold_rows(full_census):
    return [row for row in full_census.rows if row.manifold]
