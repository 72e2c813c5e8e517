import math

import numpy as np
import pytest

from relentropy import bounds
from relentropy.divergence import CountVector, ProbabilityVector
from relentropy.errors import DomainError
from relentropy.inversion import confidence_radius, gof_pvalue, sample_size


def test_radius_delta_one_is_zero():
    result = confidence_radius(100, 5, 1.0)
    assert result.radius == 0.0
    assert result.iterations == 0


def test_radius_round_trip_example():
    result = confidence_radius(100, 5, 0.05)
    achieved = bounds.upper_tail_bound(100, 5, result.radius).primary
    assert 0.05 * (1 - 1e-6) <= achieved <= 0.05
    # the closed form at the radius, recomputed independently
    x = 100 * result.radius
    assert (1 + x / 20.0) ** 10 * math.exp(-x / 2.0) == pytest.approx(0.05, rel=1e-6)


def test_radius_round_trip_random():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        n = int(rng.integers(1, 5000))
        k = int(rng.integers(1, 200))
        delta = float(10 ** rng.uniform(-12, -0.01))
        result = confidence_radius(n, k, delta)
        assert result.achieved_bound <= delta
        assert result.achieved_bound >= delta * (1 - 1e-6)


@pytest.mark.parametrize('side', [bounds.LOWER, bounds.TWO_SIDED])
def test_radius_other_sides_certify(side):
    result = confidence_radius(50, 4, 0.01, side)
    assert bounds.tail_bound(50, 4, result.radius, side).value <= 0.01
    below = result.radius * (1 - 1e-6)
    assert bounds.tail_bound(50, 4, below, side).value > 0.01 or result.radius == 0.0


def test_radius_lower_side_stops_at_mean_bound():
    # the lower value jumps to 0 right above the mean bound
    result = confidence_radius(10, 2, 1e-6, bounds.LOWER)
    mub = bounds.mean_upper_bound(10, 2)
    assert result.achieved_bound == 0.0
    assert mub < result.radius <= mub * (1 + 1e-8)


def test_radius_rejects_bad_delta():
    with pytest.raises(DomainError):
        confidence_radius(10, 2, 0.0)
    with pytest.raises(DomainError):
        confidence_radius(10, 2, 1.5)
    with pytest.raises(DomainError):
        confidence_radius(10, 2, 0.1, 'sideways')


def test_sample_size_floor():
    assert sample_size(2, 50.0, 0.99) == 1


@pytest.mark.parametrize('k,eps,delta', [
    (5, 0.1, 0.05), (2, 0.5, 0.1), (3, 0.2, 0.01), (10, 0.3, 0.05), (1, 0.1, 0.5),
    (4, 1.0, 1e-3), (20, 0.05, 0.2), (2, 2.0, 1e-6), (6, 0.4, 0.3), (3, 0.05, 0.9),
    (8, 0.8, 1e-4), (2, 0.1, 0.05), (12, 0.2, 0.02), (5, 1.5, 1e-8), (7, 0.6, 0.15),
    (30, 0.3, 0.05), (2, 0.3, 0.25), (9, 0.15, 0.1), (15, 0.5, 1e-3), (4, 0.07, 0.4),
])
def test_sample_size_is_minimal(k, eps, delta):
    n = sample_size(k, eps, delta)
    assert bounds.upper_tail_bound(n, k, eps).value <= delta
    if n > 1:
        assert bounds.upper_tail_bound(n - 1, k, eps).value > delta


def test_sample_size_exhaustive_small():
    k, eps, delta = 5, 0.1, 0.05
    n = sample_size(k, eps, delta)
    feasible = [m for m in range(1, n + 1) if bounds.upper_tail_bound(m, k, eps).value <= delta]
    assert feasible == [n]


def test_sample_size_rejects_bad_input():
    with pytest.raises(DomainError):
        sample_size(2, 0.0, 0.1)
    with pytest.raises(DomainError):
        sample_size(2, 0.1, 1.0)


def test_gof_no_evidence():
    result = gof_pvalue(CountVector((5, 5)), ProbabilityVector.uniform(2))
    assert result.statistic == 0.0
    assert result.pvalue == 1.0


def test_gof_eight_two():
    result = gof_pvalue(CountVector((8, 2)), ProbabilityVector.uniform(2))
    expected = 0.8 * math.log(1.6) + 0.2 * math.log(0.4)
    assert result.statistic == pytest.approx(expected, rel=1e-12)
    assert result.lr_statistic == pytest.approx(20.0 * expected, rel=1e-12)
    assert result.pvalue_types == 1.0
    assert result.pvalue_centered == pytest.approx(0.9729, abs=5e-4)
    assert result.pvalue == result.pvalue_centered


def test_gof_ninety_ten():
    result = gof_pvalue(CountVector((90, 10)), ProbabilityVector.uniform(2))
    assert result.statistic == pytest.approx(0.368064, abs=1e-6)
    assert result.pvalue == result.pvalue_types
    assert result.pvalue == pytest.approx(101.0 * math.exp(-100 * result.statistic), rel=1e-9)
    assert result.pvalue == pytest.approx(1.04e-14, rel=0.01)


def test_gof_impossible_observation():
    result = gof_pvalue(CountVector((1, 9)), ProbabilityVector((0.0, 1.0)))
    assert result.statistic == math.inf
    assert result.pvalue == 0.0
