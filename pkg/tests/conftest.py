import numpy as np
import pytest

from periodic_gfa import weights


@pytest.fixture(scope="session")
def ws_p1():
    """p! weights with a table long enough for wide coefficient sweeps."""
    return weights.gevrey(1.0, 4096)


@pytest.fixture(scope="session")
def ws_p2():
    return weights.gevrey(2.0, 512)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
