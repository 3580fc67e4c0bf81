import pytest

from semicomm.graph import Graph


@pytest.fixture
def triangle():
    return Graph(3, frozenset({(0, 1), (0, 2), (1, 2)}))
