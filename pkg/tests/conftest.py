import numpy as np
import pytest

from dircurv.graph import random_strongly_connected_graph


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def sc_graph_factory():
    """Deterministic factory for small strongly connected digraphs."""
    local = np.random.default_rng(99)

    def make(n=None, p=0.45):
        size = int(n) if n is not None else int(local.integers(2, 9))
        return random_strongly_connected_graph(size, p=p, rng=local)

    return make
