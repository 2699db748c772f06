import warnings

import pytest

from ffrsfr.geometry import CellGeometry, build_layout, default_geometry
from ffrsfr.optimize import DesignSolver
from ffrsfr.radio import NetworkProfile
from ffrsfr.throughput import ThroughputEngine


@pytest.fixture(scope="session")
def hex_geometry():
    return CellGeometry(500.0)


@pytest.fixture(scope="session")
def layout(hex_geometry):
    return build_layout(hex_geometry.hex_side, 2)


@pytest.fixture(scope="session")
def profile():
    return NetworkProfile()


@pytest.fixture(scope="session")
def desk_engine():
    """12 RBs, 8 users: small tables, quick to build."""
    return ThroughputEngine(NetworkProfile(total_rbs=12, mean_users=8), default_geometry())


@pytest.fixture(scope="session")
def engine8():
    return ThroughputEngine(NetworkProfile(mean_users=8), CellGeometry(500.0))


@pytest.fixture(scope="session")
def solver32():
    """Reference deployment: 100 RBs, 32 users, default radius convention."""
    return DesignSolver(ThroughputEngine(NetworkProfile(mean_users=32)))


@pytest.fixture(scope="session")
def coarse_solver():
    """12 RBs and 8 users with coarse grids for the design-logic tests."""
    return DesignSolver(ThroughputEngine(NetworkProfile(total_rbs=12, mean_users=8)))


@pytest.fixture(autouse=True)
def _quiet_numpy():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        yield
