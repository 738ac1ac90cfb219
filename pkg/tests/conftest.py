import math

import pytest

from suslov import LevelValues, Params

# one representative k per region for b = (4, 1), plus the D4 subcases
REGION_SAMPLES_41 = {
    "D1": LevelValues(1.0, 0.5),
    "D2": LevelValues(2.0, 0.75),
    "D3": LevelValues(5.0, 0.5),
    "D5": LevelValues(4.4, 1.1),
    "Sub12": LevelValues(3.4, 1.2),
    "Sub3": LevelValues(3.9, 7.0),
    "Sub4": LevelValues(3.5, 5.0),
    "C1": LevelValues(3.25, 1.75),
    "C2": LevelValues(-3.0 + 4.0 * math.sqrt(3.0), 5.0),
}

REGION_SAMPLES_11 = {
    "D1": LevelValues(0.4, 0.4),
    "D2": LevelValues(0.7, 0.7),
    "D3": LevelValues(1.5, 0.5),
    "D4": LevelValues(0.5, 1.5),
    "D5": LevelValues(1.5, 1.5),
}


@pytest.fixture(scope="session")
def b41() -> Params:
    return Params(4.0, 1.0)


@pytest.fixture(scope="session")
def b11() -> Params:
    return Params(1.0, 1.0)
