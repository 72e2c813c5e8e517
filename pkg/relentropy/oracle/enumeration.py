"""Exact law of the empirical relative entropy for small (n, k).

Compositions of n into k parts are walked by an odometer, cut into chunks of
fixed size, and each chunk is scored (statistic value and multinomial
log-pmf from a log-factorial table) independently. Chunks are reduced in
chunk order, so the result does not depend on how many threads scored them.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from relentropy.config import config
from relentropy.divergence import empirical_kl_batch
from relentropy.errors import BudgetError, DomainError
from relentropy.log import get_logger

logger = get_logger(__name__)

UPPER = 'upper'
LOWER = 'lower'


@dataclass(frozen=True, eq=False)
class ExactDistribution(object):
    """Finite law given as atoms sorted by value.

    Attributes:
        values: numpy array of distinct statistic levels, ascending
        probs: numpy array of their probabilities
        n: Sample size the law was built from (None for ad-hoc laws)
        p: Generating ProbabilityVector (None for ad-hoc laws)
    """

    values: np.ndarray
    probs: np.ndarray
    n: int = None
    p: object = None

    @classmethod
    def from_atoms(cls, values, probs, n=None, p=None, tol=None):
        """Sort, drop null atoms and merge values closer than `tol`.

        Args:
            values: Array of atom values (any order, repeats allowed)
            probs: Array of matching probabilities
            n: Optional sample size to record
            p: Optional ProbabilityVector to record
            tol: Merge tolerance on values (config.ATOM_MERGE_TOL)

        Returns:
            ExactDistribution
        """
        tol = config.ATOM_MERGE_TOL if tol is None else tol
        values = np.asarray(values, dtype=np.float64).ravel()
        probs = np.asarray(probs, dtype=np.float64).ravel()
        keep = probs > 0.0
        values = values[keep]
        probs = probs[keep]
        if values.size == 0:
            raise DomainError('a distribution needs at least one atom of positive mass')

        order = np.argsort(values, kind='stable')
        values = values[order]
        probs = probs[order]

        starts = np.flatnonzero(np.r_[True, np.diff(values) > tol])
        ends = np.r_[starts[1:], values.size]
        merged = np.array([
            probs[a] if b - a == 1 else math.fsum(probs[a:b].tolist())
            for a, b in zip(starts, ends)
        ])
        return cls(values=values[starts], probs=merged, n=n, p=p)

    @classmethod
    def point_mass(cls, value):
        return cls(values=np.array([float(value)]), probs=np.array([1.0]))

    @property
    def atoms(self):
        return list(zip(self.values.tolist(), self.probs.tolist()))

    def total_mass(self):
        return math.fsum(self.probs.tolist())

    def mean(self):
        return math.fsum((self.values * self.probs).tolist())

    def survival(self):
        """P(Z >= v_j) for every atom v_j."""
        return np.cumsum(self.probs[::-1])[::-1]


@dataclass(frozen=True)
class ExactMoments(object):
    mean: float
    variance: float
    central_moment: float
    order: int


def composition_count(n, k):
    """C(n+k-1, k-1)."""
    return math.comb(n + k - 1, k - 1)


def compositions(n, k):
    """Yield every composition of n into k parts (odometer order).

    Starts at (n, 0, ..., 0) and ends at (0, ..., 0, n).
    """
    if k < 1 or n < 0:
        raise DomainError('need n >= 0 and k >= 1, got n={} k={}'.format(n, k))
    parts = [n] + [0] * (k - 1)
    yield tuple(parts)
    if k == 1:
        return
    while parts[-1] != n:
        i = 0
        while parts[i] == 0:
            i += 1
        head = parts[i]
        parts[i] = 0
        parts[0] = head - 1
        parts[i + 1] += 1
        yield tuple(parts)


def _chunks(n, k, size):
    block = []
    for comp in compositions(n, k):
        block.append(comp)
        if len(block) == size:
            yield np.array(block, dtype=np.int64)
            block = []
    if block:
        yield np.array(block, dtype=np.int64)


def _check_budget(n, k, budget):
    budget = config.ENUMERATION_BUDGET if budget is None else budget
    count = composition_count(n, k)
    if count > budget:
        raise BudgetError(count, budget)
    return count


def composition_table(n, p, budget=None, threads=None):
    """Every composition on the support of p with its probability and statistic.

    Args:
        n: Sample size, >= 1
        p: ProbabilityVector
        budget: Maximum composition count (config.ENUMERATION_BUDGET)
        threads: Worker threads for chunk scoring (config.THREADS)

    Returns:
        tuple: (counts 2-D array over the support cells, probs, values)
    """
    if n < 1:
        raise DomainError('sample size must be positive, got {}'.format(n))
    support, _ = p.restrict()
    probs = support.as_array()
    k = support.k
    count = _check_budget(n, k, budget)
    threads = threads or config.THREADS

    log_fact = gammaln(np.arange(n + 1) + 1.0)
    log_p = np.log(probs)

    def score(block):
        log_pmf = log_fact[n] - log_fact[block].sum(axis=1) + (block * log_p).sum(axis=1)
        return block, np.exp(log_pmf), empirical_kl_batch(block, probs)

    chunks = _chunks(n, k, config.ENUMERATION_CHUNK)
    if threads > 1 and count > config.ENUMERATION_CHUNK:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            scored = list(pool.map(score, chunks))
    else:
        scored = [score(block) for block in chunks]

    counts = np.concatenate([s[0] for s in scored])
    weights = np.concatenate([s[1] for s in scored])
    values = np.concatenate([s[2] for s in scored])
    return counts, weights, values


def enumerate_statistic(n, p, budget=None, threads=None):
    """Exact law of the empirical relative entropy of Multinomial(n, p).

    Zero-probability cells are dropped first; they never receive counts and
    leave the statistic unchanged.

    Args:
        n: Sample size
        p: ProbabilityVector
        budget: Maximum composition count (config.ENUMERATION_BUDGET)
        threads: Worker threads (config.THREADS)

    Returns:
        ExactDistribution
    """
    _, weights, values = composition_table(n, p, budget=budget, threads=threads)
    total = math.fsum(weights.tolist())
    return ExactDistribution.from_atoms(values, weights / total, n=n, p=p)


def exact_moments(d, m=1):
    """Mean, variance and central moment of order 2m.

    Args:
        d: ExactDistribution
        m: Positive integer

    Returns:
        ExactMoments
    """
    if int(m) != m or m < 1:
        raise DomainError('moment order must be a positive integer, got {!r}'.format(m))
    mean = d.mean()
    centered = d.values - mean
    variance = math.fsum((d.probs * centered ** 2).tolist())
    central = math.fsum((d.probs * centered ** (2 * m)).tolist())
    return ExactMoments(mean=mean, variance=variance, central_moment=central, order=2 * m)


def exact_tail(d, threshold, side=UPPER):
    """P(Z >= threshold) for 'upper', P(Z <= threshold) for 'lower'."""
    if side == UPPER:
        mask = d.values >= threshold
    elif side == LOWER:
        mask = d.values <= threshold
    else:
        raise DomainError('side must be upper or lower, got {!r}'.format(side))
    return min(1.0, max(0.0, math.fsum(d.probs[mask].tolist())))


def exact_centered_log_mgf(d, t):
    """log E exp(t (Z - E Z)), max-shifted through logsumexp.

    Args:
        d: ExactDistribution
        t: Real scalar or 1-D array

    Returns:
        float or numpy.ndarray
    """
    ts = np.asarray(t, dtype=np.float64)
    mean = d.mean()
    out = logsumexp(np.multiply.outer(ts, d.values), b=d.probs, axis=-1) \
        - math.log(d.total_mass()) - ts * mean
    out = np.where(ts == 0.0, 0.0, out)
    if out.ndim == 0:
        return float(out)
    return out


def mgf_representation_gap(d, t):
    """Survival-integral form of the centered log-MGF minus the direct form.

    For Z >= 0 the log-MGF equals
    log(1 + t EZ + int_0^inf t (e^{tx} - 1) P(Z >= x) dx) - t EZ. The
    survival function of a finite law is constant on each gap between atoms,
    so the integral is a finite sum of closed-form pieces.

    Args:
        d: ExactDistribution with non-negative atoms
        t: Real

    Returns:
        float, zero up to rounding
    """
    if d.values[0] < 0.0:
        raise DomainError('the survival representation needs a non-negative variable')
    if t == 0:
        return 0.0

    mean = d.mean()
    right = d.values
    left = np.r_[0.0, right[:-1]]
    survival = d.survival()
    pieces = survival * ((np.expm1(t * right) - np.expm1(t * left)) - t * (right - left))
    inner = t * mean + math.fsum(pieces.tolist())
    represented = math.log1p(inner) - t * mean
    return represented - exact_centered_log_mgf(d, t)
