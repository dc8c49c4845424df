import pytest

from src.engine.explorer import explore
from src.protocol.catalog import ScenarioConfig, get_scenario
from src.protocol.node import make_main


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow catalog sweeps")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def small_config():
    return ScenarioConfig(name="small", scenario="S1", n=2, budget=1, faults="none")


@pytest.fixture(scope="session")
def explored():
    """Explore catalog scenarios once per session."""
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = explore(make_main(get_scenario(name)))
        return cache[name]

    return get
