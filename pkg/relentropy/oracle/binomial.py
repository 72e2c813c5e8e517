"""Binomial building blocks of the multinomial-to-binomial reduction.

For X ~ Binomial(n, p) two families of non-negative variables are built
exactly from the binomial pmf:

- half-KL: n KL((X/n, 1-X/n) || (p, 1-p)) restricted to X >= np (side '+')
  or X <= np (side '-'), both indicators closed;
- reduced: n p phi_+(X/np) and n p phi_-(X/np).

Both are stochastically dominated by Exponential(1); the margins below
measure the largest excess of their survival function over exp(-x).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp, rel_entr
from scipy.stats import binom

from relentropy.bounds import subgamma_envelope
from relentropy.divergence import phi_minus, phi_plus
from relentropy.errors import DomainError
from relentropy.oracle.enumeration import ExactDistribution, enumerate_statistic, \
    exact_centered_log_mgf

PLUS = '+'
MINUS = '-'
HALFKL = 'halfkl'
REDUCED = 'phi'

_SIDE_ALIASES = {
    '+': PLUS, 'plus': PLUS, 'upper': PLUS,
    '-': MINUS, 'minus': MINUS, 'lower': MINUS,
}


@dataclass(frozen=True)
class ReductionGap(object):
    lhs: float
    rhs: float


def _side(side):
    try:
        return _SIDE_ALIASES[side]
    except KeyError:
        raise DomainError('side must be + or -, got {!r}'.format(side))


def _check_binomial(n, p):
    if int(n) != n or n < 1:
        raise DomainError('n must be a positive integer, got {!r}'.format(n))
    if not 0.0 < p < 1.0:
        raise DomainError('p must lie strictly between 0 and 1, got {!r}'.format(p))


def dominated_law(n, p, kind=HALFKL, side=PLUS):
    """Exact law of a half-KL or reduced-phi variable of Binomial(n, p).

    Args:
        n: Number of trials
        p: Success probability in (0, 1)
        kind: 'halfkl' or 'phi'
        side: '+' or '-'

    Returns:
        ExactDistribution
    """
    _check_binomial(n, p)
    side = _side(side)
    x = np.arange(n + 1, dtype=np.float64)
    pmf = binom.pmf(np.arange(n + 1), n, p)
    mean = n * p

    if kind == HALFKL:
        freq = x / n
        z = n * (rel_entr(freq, p) + rel_entr(1.0 - freq, 1.0 - p))
        mask = x >= mean if side == PLUS else x <= mean
        z = np.where(mask, z, 0.0)
    elif kind == REDUCED:
        ratio = x / mean
        part = phi_plus(ratio) if side == PLUS else phi_minus(ratio)
        z = mean * part
    else:
        raise DomainError('kind must be {!r} or {!r}, got {!r}'.format(HALFKL, REDUCED, kind))

    return ExactDistribution.from_atoms(np.maximum(z, 0.0), pmf, n=n)


def domination_margin(d):
    """max over atoms x of P(Z >= x) - exp(-x); <= 0 certifies domination.

    The survival function is left-continuous and constant between atoms
    while exp(-x) decreases, so the supremum over x >= 0 is attained at an
    atom (or at 0, where both sides equal 1).
    """
    excess = d.survival() - np.exp(-d.values)
    return float(max(0.0, excess.max()))


def binomial_domination_margin(n, p, side=PLUS):
    """Domination margin of the half-KL variable Z_+ or Z_-."""
    return domination_margin(dominated_law(n, p, HALFKL, side))


def phi_part_domination_margin(n, p, side=PLUS):
    """Domination margin of n p phi_+(X/np) or n p phi_-(X/np)."""
    return domination_margin(dominated_law(n, p, REDUCED, side))


def envelope_gap(d, ts):
    """max over t of the exact centered log-MGF of d minus B(t).

    Args:
        d: ExactDistribution of an exponentially dominated variable
        ts: 1-D array of t values, all < 1

    Returns:
        tuple: (largest gap, t where it occurs)
    """
    ts = np.asarray(ts, dtype=np.float64)
    gaps = exact_centered_log_mgf(d, ts) - subgamma_envelope(ts)
    worst = int(np.argmax(gaps))
    return float(gaps[worst]), float(ts[worst])


def _log_centered_mgf_of(values, pmf, s):
    """log E exp(s (V - E V)) for a finite law given by values and pmf."""
    if s == 0.0:
        return 0.0
    mean = math.fsum((values * pmf).tolist())
    return float(logsumexp(s * values, b=pmf)) - s * mean


def reduction_gap(n, p, t, budget=None, threads=None):
    """Both sides of the product reduction of the centered MGF.

    lhs is E exp(t (D - E D)) from the joint enumeration; rhs is the product
    over cells of sqrt(E exp(2t (p_i phi_+(X_i/np_i) - mean))) times the
    matching phi_- product, each factor taken from the exact
    Binomial(n, p_i) marginal.

    Args:
        n: Sample size
        p: ProbabilityVector
        t: Real
        budget: Composition budget for the joint side
        threads: Worker threads for the joint side

    Returns:
        ReductionGap
    """
    d = enumerate_statistic(n, p, budget=budget, threads=threads)
    lhs = math.exp(exact_centered_log_mgf(d, t))

    support, _ = p.restrict()
    counts = np.arange(n + 1)
    log_rhs = []
    for p_i in support.probs:
        pmf = binom.pmf(counts, n, p_i)
        ratio = counts / (n * p_i)
        for part in (phi_plus(ratio), phi_minus(ratio)):
            log_rhs.append(0.5 * _log_centered_mgf_of(p_i * part, pmf, 2.0 * t))
    rhs = math.exp(math.fsum(log_rhs))
    return ReductionGap(lhs=lhs, rhs=rhs)
