import math

import numpy as np
import pytest

from outpost.django.grover.operators import (
    SIX_STAGE_ALPHAS,
    PhaseSchedule,
)


@pytest.fixture
def six_stage():
    return PhaseSchedule.matched(SIX_STAGE_ALPHAS)


@pytest.fixture
def grover_pair():
    return PhaseSchedule.repeated(math.pi, 1, beta=math.pi)


@pytest.fixture
def rng():
    return np.random.default_rng(42)
