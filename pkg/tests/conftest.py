import pytest

from mziqfi import InterferometerConfig
from mziqfi.oracle import FockWorkspace

DESK_ALPHA = -1.2j
DESK_R = 0.5
DESK_PHI = 0.3
DESK_THETAS = (0.4, 0.8, 1.6, 2.4)


@pytest.fixture
def desk_cfg():
    return InterferometerConfig(DESK_ALPHA, DESK_R, 0.8, DESK_PHI)


@pytest.fixture(scope="session")
def desk_workspace():
    return FockWorkspace(DESK_ALPHA, DESK_R, 40)
