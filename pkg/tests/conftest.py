import json
from pathlib import Path

import pytest

from geopot import get_halfline, get_interval, get_renewal
from geopot.levy import get_levy_density

GOLDENS_PATH = Path(__file__).parent / "goldens" / "goldens.json"


@pytest.fixture(scope="session")
def goldens() -> dict:
    with open(GOLDENS_PATH, encoding="utf-8") as fh:
        return json.load(fh)


# Table construction dominates test wall time, so every module shares one
# evaluator per (alpha, mode) through the process-wide registries.

@pytest.fixture(scope="session")
def ren1():
    return get_renewal(1.0)


@pytest.fixture(scope="session")
def hp1():
    return get_halfline(1.0)


@pytest.fixture(scope="session")
def ip1():
    return get_interval(1.0)


@pytest.fixture(scope="session")
def nu1():
    return get_levy_density(1.0)
