from functools import lru_cache

import pytest

from aztec_lshape.exact_count import count
from aztec_lshape.painleve import default_solution
from aztec_lshape.regions import RegionSpec


@lru_cache(maxsize=None)
def exact_log(N, m, k, eps, a):
    """Cached ``log F_N^{m,k}(a; eps)`` as a float, shared across test modules."""
    return float(count(RegionSpec.lshape(N, m, k, eps), a).log_value)


@pytest.fixture(scope="session")
def painleve_solution():
    return default_solution()
