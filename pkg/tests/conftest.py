import numpy as np
import pytest

from gencorr import SearchConfig


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def fast_cfg():
    """Reduced optimizer budget for tests where defaults are overkill."""
    return SearchConfig(starts=8, max_evals=800, rng_seed=7)
