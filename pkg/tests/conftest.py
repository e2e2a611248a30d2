import numpy as np
import pytest

from swmoments.basis import coefficient_tensors


@pytest.fixture(scope="session")
def tensors_cache():
    cache = {}

    def get(N):
        if N not in cache:
            cache[N] = coefficient_tensors(N)
        return cache[N]

    return get


@pytest.fixture()
def rng():
    return np.random.default_rng(20250808)
