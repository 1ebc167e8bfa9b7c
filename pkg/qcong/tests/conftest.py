"""
Shared fixtures and the `slow` marker for desk-scale sweeps.
Run the sweeps with `pytest --runslow`.
"""
import pytest

from qcong.services.cyclotomic import CyclotomicCache


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="Run the full-range sweeps")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-range sweep, skipped unless --runslow is given")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def cache():
    """One cyclotomic cache shared by every test in the session."""
    return CyclotomicCache().warm_up(60)
