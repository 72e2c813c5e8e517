import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest

from relentropy.divergence import ProbabilityVector


@pytest.fixture
def uniform2():
    return ProbabilityVector.uniform(2)


@pytest.fixture
def skewed3():
    return ProbabilityVector((0.1, 0.2, 0.7))
