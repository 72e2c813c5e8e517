import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from relentropy.divergence import CountVector, ProbabilityVector, empirical_kl, \
    empirical_kl_batch, kl_divergence, kl_via_phi, likelihood_ratio_statistic, phi, phi_minus, \
    phi_parts, phi_plus
from relentropy.errors import DomainError, ShapeError

nonneg = st.floats(min_value=0.0, max_value=1e6, allow_nan=False, allow_infinity=False)


@st.composite
def prob_vectors(draw, k=None):
    k = k or draw(st.integers(min_value=1, max_value=6))
    raw = draw(st.lists(st.floats(min_value=0.0, max_value=10.0), min_size=k, max_size=k))
    if sum(raw) <= 0.0:
        raw[0] = 1.0
    return ProbabilityVector.from_values(raw, renormalize=True)


def test_phi_known_values():
    assert phi(1.0) == 0.0
    assert phi(0.0) == 1.0
    assert phi(2.0) == pytest.approx(2.0 * math.log(2.0) - 1.0, rel=1e-15)
    np.testing.assert_allclose(phi(np.array([0.0, 1.0, 2.0])), [1.0, 0.0, 0.3862943611198906])


def test_phi_rejects_negative():
    with pytest.raises(DomainError):
        phi(-0.1)
    with pytest.raises(DomainError):
        phi_parts(-1.0)


def test_phi_parts_examples():
    two = phi_parts(2.0)
    assert two.plus == pytest.approx(0.3862943611, rel=1e-9)
    assert two.minus == 0.0

    half = phi_parts(0.5)
    assert half.plus == 0.0
    assert half.minus == pytest.approx(0.5 * math.log(0.5) + 0.5, rel=1e-12)

    one = phi_parts(1.0)
    assert (one.plus, one.minus, one.total) == (0.0, 0.0, 0.0)


@given(nonneg)
def test_phi_parts_sum(x):
    parts = phi_parts(x)
    assert parts.total == parts.plus + parts.minus
    assert parts.total >= 0.0
    assert parts.plus == 0.0 or parts.minus == 0.0


@given(nonneg, nonneg)
def test_phi_halves_monotone(x, y):
    lo, hi = min(x, y), max(x, y)
    assert phi_plus(lo) <= phi_plus(hi)
    assert phi_minus(lo) >= phi_minus(hi)


def test_phi_convex_on_grid():
    xs = np.linspace(0.0, 5.0, 101)
    values = phi(xs)
    midpoints = 0.5 * (values[:-2] + values[2:])
    assert np.all(values[1:-1] <= midpoints + 1e-12)


def test_kl_examples():
    half = ProbabilityVector((0.5, 0.5))
    assert kl_divergence(half, half) == 0.0
    assert kl_divergence(ProbabilityVector((1.0, 0.0)), half) == pytest.approx(math.log(2.0))
    assert kl_divergence(half, ProbabilityVector((1.0, 0.0))) == math.inf


def test_kl_shape_mismatch():
    with pytest.raises(ShapeError):
        kl_divergence(ProbabilityVector.uniform(2), ProbabilityVector.uniform(3))


@given(prob_vectors(k=4), prob_vectors(k=4))
def test_kl_two_forms_agree(q, p):
    direct = kl_divergence(q, p, self_check=True)
    other = kl_via_phi(q, p)
    if math.isinf(direct):
        assert math.isinf(other)
    else:
        assert direct >= 0.0
        assert direct == pytest.approx(other, rel=1e-12, abs=1e-15)


def test_phi_at_infinity():
    assert phi(math.inf) == math.inf
    assert phi_plus(math.inf) == math.inf


def test_kl_two_forms_agree_with_subnormal_p():
    q = (0.0, 0.0, 1.0, 0.0)
    p = (0.0, 0.0, 2.2e-311, 1.0)
    other = kl_via_phi(q, p)
    assert math.isfinite(other)
    assert other == pytest.approx(-math.log(2.2e-311), rel=1e-12)
    assert kl_divergence(q, p, self_check=True) == pytest.approx(other, rel=1e-12)


def test_empirical_kl_examples():
    half = ProbabilityVector.uniform(2)
    expected = 0.75 * math.log(1.5) + 0.25 * math.log(0.5)
    assert empirical_kl(CountVector((3, 1)), half) == pytest.approx(expected, rel=1e-12)
    assert empirical_kl(CountVector((2, 2)), half) == 0.0
    assert empirical_kl(CountVector((0, 4)), half) == pytest.approx(math.log(2.0), rel=1e-12)


def test_empirical_kl_impossible_observation():
    assert empirical_kl(CountVector((1, 3)), ProbabilityVector((0.0, 1.0))) == math.inf


def test_likelihood_ratio_statistic():
    x = CountVector((8, 2))
    p = ProbabilityVector.uniform(2)
    assert likelihood_ratio_statistic(x, p) == pytest.approx(20.0 * empirical_kl(x, p))


def test_batch_matches_scalar():
    p = ProbabilityVector((0.2, 0.3, 0.5))
    counts = np.array([[1, 2, 3], [6, 0, 0], [0, 0, 6], [2, 2, 2]])
    batch = empirical_kl_batch(counts, p.as_array())
    scalar = [empirical_kl(CountVector(tuple(row)), p) for row in counts]
    np.testing.assert_allclose(batch, scalar, rtol=1e-12, atol=1e-15)


def test_probability_vector_validation():
    with pytest.raises(DomainError):
        ProbabilityVector((0.5, 0.6))
    with pytest.raises(DomainError):
        ProbabilityVector((-0.5, 1.5))
    with pytest.raises(DomainError):
        ProbabilityVector((0.0, 0.0))
    renormalized = ProbabilityVector.from_values([1, 1, 2], renormalize=True)
    assert renormalized.probs == (0.25, 0.25, 0.5)


def test_effective_k():
    p = ProbabilityVector((0.0, 0.5, 0.5))
    assert p.effective_k() == 2
    assert CountVector((0, 3, 1)).effective_k(p) == 2
    assert CountVector((1, 3, 1)).effective_k(p) == 3
    support, keep = p.restrict()
    assert support.probs == (0.5, 0.5)
    assert keep.tolist() == [1, 2]


def test_count_vector_validation():
    with pytest.raises(DomainError):
        CountVector((-1, 2))
    with pytest.raises(DomainError):
        CountVector((0, 0))
    with pytest.raises(DomainError):
        CountVector((1.5, 2))
    assert CountVector((3, 1)).n == 4
