import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from circleflow.spectral import Grid


@pytest.fixture
def grid():
    return Grid(256)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
