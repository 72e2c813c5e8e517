"""Inversion of the monotone tail bounds.

Confidence radii for a failure probability, sample-size planning and
finite-sample goodness-of-fit p-values. Every bound inverted here is
non-increasing in eps and in n, so plain bisection on the predicate
`bound <= delta` brackets the answer.

p-value construction: P(D >= d) = P(D >= E + (d - E)) and the upper tail
bound is non-increasing in its deviation, so replacing the unknown mean E by
its upper bound log(1 + (k-1)/n) can only enlarge the bound. Both the
centered and the method-of-types values therefore dominate P(D >= d), and
being non-increasing in d they give a super-uniform p-value under H0.
"""

import math
from dataclasses import dataclass

import numpy as np

from relentropy import bounds
from relentropy.config import config
from relentropy.divergence import empirical_kl
from relentropy.errors import DomainError
from relentropy.log import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class ConfidenceResult(object):
    radius: float
    side: str
    achieved_bound: float
    iterations: int


@dataclass(frozen=True)
class GofResult(object):
    statistic: float
    lr_statistic: float
    pvalue_types: float
    pvalue_centered: float
    pvalue: float
    n: int
    k: int


def _check_side(side):
    if side not in bounds.SIDES:
        raise DomainError('side must be one of {}, got {!r}'.format(bounds.SIDES, side))


def _initial_bracket(n, k, delta, side):
    """Upper end of the eps search interval, from the analytic minform inverse."""
    log_inv = math.log(1.0 / delta)
    minform_root = max(math.sqrt(24.0 * k * log_inv) / n, 8.0 * log_inv / n)
    hi = 2.0 * minform_root + 1.0
    if side in (bounds.LOWER, bounds.TWO_SIDED):
        hi = max(hi, float(np.nextafter(bounds.mean_upper_bound(n, k), np.inf)))
    return hi


def confidence_radius(n, k, delta, side=bounds.UPPER, max_iter=None, rtol=None):
    """Smallest eps whose tail bound is at most delta.

    Args:
        n: Sample size
        k: Effective alphabet size
        delta: Failure probability in (0, 1]
        side: 'upper', 'lower' or 'two_sided'
        max_iter: Bisection iteration cap (config.BISECTION_MAX_ITER)
        rtol: Relative bracket width at termination (config.BISECTION_RTOL)

    Returns:
        ConfidenceResult
    """
    max_iter = max_iter or config.BISECTION_MAX_ITER
    rtol = rtol or config.BISECTION_RTOL
    _check_side(side)
    if not 0.0 < delta <= 1.0:
        raise DomainError('delta must lie in (0, 1], got {!r}'.format(delta))

    def bound_at(eps):
        return bounds.tail_bound(n, k, eps, side).value

    at_zero = bound_at(0.0)
    if at_zero <= delta:
        return ConfidenceResult(radius=0.0, side=side, achieved_bound=at_zero, iterations=0)

    lo = 0.0
    hi = _initial_bracket(n, k, delta, side)
    expansions = 0
    while bound_at(hi) > delta:
        lo = hi
        hi *= 2.0
        expansions += 1
        if expansions > max_iter:
            raise DomainError('could not bracket the radius for delta={!r}'.format(delta))

    iterations = 0
    while hi - lo > rtol * hi and iterations < max_iter:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if bound_at(mid) <= delta:
            hi = mid
        else:
            lo = mid
        iterations += 1

    logger.debug('radius n=%s k=%s delta=%s side=%s -> %r after %d steps',
                 n, k, delta, side, hi, iterations)
    return ConfidenceResult(radius=hi, side=side, achieved_bound=bound_at(hi),
                            iterations=iterations)


def sample_size(k, eps, delta, side=bounds.UPPER):
    """Smallest n whose tail bound at eps is at most delta.

    Exponential search for a feasible n, then binary search below it.

    Args:
        k: Effective alphabet size
        eps: Deviation, > 0
        delta: Failure probability in (0, 1)
        side: 'upper', 'lower' or 'two_sided'

    Returns:
        int
    """
    _check_side(side)
    if not eps > 0.0:
        raise DomainError('eps must be positive, got {!r}'.format(eps))
    if not 0.0 < delta < 1.0:
        raise DomainError('delta must lie in (0, 1), got {!r}'.format(delta))

    def bound_at(n):
        return bounds.tail_bound(n, k, eps, side).value

    if bound_at(1) <= delta:
        return 1

    lo, hi = 1, 2
    while bound_at(hi) > delta:
        lo, hi = hi, hi * 2
        if hi > 2 ** 62:
            raise DomainError('no feasible sample size below 2^62')

    # invariant: bound(lo) > delta >= bound(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if bound_at(mid) <= delta:
            hi = mid
        else:
            lo = mid
    return hi


def gof_pvalue(x, p0):
    """Finite-sample valid p-value for H0: X ~ Multinomial(n, p0).

    Args:
        x: CountVector
        p0: ProbabilityVector with the same k

    Returns:
        GofResult
    """
    statistic = empirical_kl(x, p0)
    n = x.n
    k = x.effective_k(p0)

    if math.isinf(statistic):
        return GofResult(statistic=math.inf, lr_statistic=math.inf, pvalue_types=0.0,
                         pvalue_centered=0.0, pvalue=0.0, n=n, k=k)

    pvalue_types = bounds.types_bound(n, k, statistic)
    mean_bound = bounds.mean_upper_bound(n, k)
    if statistic > mean_bound:
        pvalue_centered = bounds.upper_tail_bound(n, k, statistic - mean_bound).value
    else:
        pvalue_centered = 1.0

    return GofResult(
        statistic=statistic,
        lr_statistic=2.0 * n * statistic,
        pvalue_types=pvalue_types,
        pvalue_centered=pvalue_centered,
        pvalue=min(pvalue_types, pvalue_centered),
        n=n,
        k=k,
    )
