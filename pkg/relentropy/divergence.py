"""Relative entropy primitives.

phi(x) = x log x - x + 1 with phi(0) = 1, its monotone halves phi_+ / phi_-,
the KL divergence and the empirical relative entropy of a multinomial count
vector. All logarithms are natural. +inf is an ordinary return value: an
observation in a cell of zero hypothesised probability has infinite
divergence.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import rel_entr, xlogy

from relentropy.config import config
from relentropy.errors import DomainError, ShapeError


@dataclass(frozen=True)
class ProbabilityVector(object):
    """Hypothesised distribution P = (p_1, ..., p_k) on k cells."""

    probs: tuple

    def __post_init__(self):
        probs = tuple(float(v) for v in self.probs)
        object.__setattr__(self, 'probs', probs)

        if len(probs) == 0:
            raise DomainError('probability vector is empty')
        if any(not math.isfinite(v) or v < 0.0 for v in probs):
            raise DomainError('probabilities must be finite and non-negative: {}'.format(probs))
        total = math.fsum(probs)
        if abs(total - 1.0) > config.PROB_TOL:
            raise DomainError(
                'probabilities sum to {!r}, not 1 (pass renormalize=True to rescale)'.format(total))
        if not any(v > 0.0 for v in probs):
            raise DomainError('probability vector has no positive entry')

    @classmethod
    def from_values(cls, values, renormalize=False):
        """Build a ProbabilityVector from user-entered numbers.

        Args:
            values: Iterable of probabilities
            renormalize: Divide by the sum instead of rejecting a vector whose
                sum misses 1 by more than PROB_TOL

        Returns:
            ProbabilityVector
        """
        values = [float(v) for v in values]
        if renormalize:
            if any(not math.isfinite(v) or v < 0.0 for v in values):
                raise DomainError('probabilities must be finite and non-negative')
            total = math.fsum(values)
            if total <= 0.0:
                raise DomainError('cannot renormalize a vector with zero sum')
            values = [v / total for v in values]
        return cls(tuple(values))

    @classmethod
    def uniform(cls, k):
        if k < 1:
            raise DomainError('alphabet size must be positive, got {}'.format(k))
        return cls(tuple([1.0 / k] * k))

    @property
    def k(self):
        return len(self.probs)

    def as_array(self):
        return np.asarray(self.probs, dtype=np.float64)

    def effective_k(self):
        """Number of cells with strictly positive probability."""
        return sum(1 for v in self.probs if v > 0.0)

    def restrict(self):
        """Drop zero-probability cells.

        Returns:
            tuple: (ProbabilityVector on the support, numpy index array of kept cells)
        """
        keep = np.flatnonzero(self.as_array() > 0.0)
        return ProbabilityVector(tuple(self.probs[i] for i in keep)), keep


@dataclass(frozen=True)
class CountVector(object):
    """A multinomial observation (X_1, ..., X_k) with sample size n."""

    counts: tuple

    def __post_init__(self):
        counts = []
        for v in self.counts:
            if isinstance(v, float) and not v.is_integer():
                raise DomainError('counts must be integers, got {!r}'.format(v))
            counts.append(int(v))
        object.__setattr__(self, 'counts', tuple(counts))

        if len(counts) == 0:
            raise DomainError('count vector is empty')
        if any(v < 0 for v in counts):
            raise DomainError('counts must be non-negative: {}'.format(counts))
        if sum(counts) < 1:
            raise DomainError('sample size must be at least 1')

    @property
    def n(self):
        return sum(self.counts)

    @property
    def k(self):
        return len(self.counts)

    def as_array(self):
        return np.asarray(self.counts, dtype=np.int64)

    def effective_k(self, p):
        """Alphabet size after dropping cells with p_i = 0 and X_i = 0."""
        _check_pair(self.k, p.k)
        return sum(1 for x, q in zip(self.counts, p.probs) if q > 0.0 or x > 0)


@dataclass(frozen=True)
class PhiValue(object):
    plus: float
    minus: float
    total: float


def _check_pair(k_left, k_right):
    if k_left != k_right:
        raise ShapeError('alphabet sizes differ: {} vs {}'.format(k_left, k_right))


def phi(x):
    """Evaluate phi(x) = x log x - x + 1, with phi(0) = 1.

    Accepts a scalar or an array; scalars come back as float.

    Args:
        x: Non-negative real(s)

    Returns:
        float or numpy.ndarray
    """
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr < 0.0) or np.any(np.isnan(arr)):
        raise DomainError('phi is defined on x >= 0, got {!r}'.format(x))
    # xlogy(0, 0) == 0 fixes phi(0) = 1 without a limit
    with np.errstate(invalid='ignore'):
        out = np.where(np.isinf(arr), np.inf, xlogy(arr, arr) - arr + 1.0)
    if out.ndim == 0:
        return float(out)
    return out


def phi_plus(x):
    arr = np.asarray(x, dtype=np.float64)
    out = np.where(arr >= 1.0, phi(arr), 0.0)
    return float(out) if out.ndim == 0 else out


def phi_minus(x):
    arr = np.asarray(x, dtype=np.float64)
    out = np.where(arr <= 1.0, phi(arr), 0.0)
    return float(out) if out.ndim == 0 else out


def phi_parts(x):
    """Split phi(x) into its non-decreasing and non-increasing halves.

    Args:
        x: Non-negative real

    Returns:
        PhiValue with plus = phi(x)[x >= 1], minus = phi(x)[x <= 1]
    """
    value = phi(float(x))
    plus = value if x >= 1.0 else 0.0
    minus = value if x <= 1.0 else 0.0
    return PhiValue(plus=plus, minus=minus, total=value)


def _as_probs(v):
    if isinstance(v, ProbabilityVector):
        return v.as_array()
    return np.asarray(v, dtype=np.float64)


def kl_divergence(q, p, self_check=False):
    """Relative entropy KL(q || p) = sum q_i log(q_i / p_i).

    Args:
        q: ProbabilityVector (or array of frequencies)
        p: ProbabilityVector
        self_check: Also evaluate sum p_i phi(q_i / p_i) and require agreement

    Returns:
        float, +inf when some q_i > 0 has p_i = 0
    """
    qa = _as_probs(q)
    pa = _as_probs(p)
    _check_pair(qa.size, pa.size)

    terms = rel_entr(qa, pa)
    if np.isinf(terms).any():
        return math.inf
    value = math.fsum(terms.tolist())

    if self_check:
        other = kl_via_phi(qa, pa)
        scale = max(abs(value), abs(other), 1e-300)
        gap = abs(value - other)
        if not math.isfinite(gap) or (gap > 1e-12 * scale and gap > 1e-15):
            raise AssertionError(
                'KL self-check failed: direct {!r} vs phi form {!r}'.format(value, other))
    return value


def kl_via_phi(q, p):
    """KL(q || p) in its f-divergence form sum p_i phi(q_i / p_i).

    A cell with p_i = 0 contributes 0 if q_i = 0 and +inf otherwise.
    """
    qa = _as_probs(q)
    pa = _as_probs(p)
    _check_pair(qa.size, pa.size)

    if np.any((pa == 0.0) & (qa > 0.0)):
        return math.inf
    live = pa > 0.0
    qs, ps = qa[live], pa[live]
    with np.errstate(over='ignore'):
        ratio = qs / ps
    wide = np.isinf(ratio)
    terms = np.empty_like(ps)
    terms[~wide] = ps[~wide] * phi(ratio[~wide])
    # q/p overflowed for a subnormal p: expand p phi(q/p) = q (log q - log p) - q + p
    terms[wide] = qs[wide] * (np.log(qs[wide]) - np.log(ps[wide])) - qs[wide] + ps[wide]
    return math.fsum(terms.tolist())


def empirical_kl(x, p):
    """Empirical relative entropy KL(X/n || P); 2n times it is the LR statistic.

    Args:
        x: CountVector
        p: ProbabilityVector with the same k

    Returns:
        float, +inf for an observation impossible under P
    """
    _check_pair(x.k, p.k)
    freqs = x.as_array() / float(x.n)
    return kl_divergence(freqs, p)


def empirical_kl_batch(counts, probs):
    """Vectorised empirical relative entropy for a stack of count vectors.

    Args:
        counts: 2-D integer array, one composition per row
        probs: 1-D probability array

    Returns:
        1-D float array (inf rows for impossible observations)
    """
    counts = np.asarray(counts)
    probs = np.asarray(probs, dtype=np.float64)
    if counts.ndim != 2:
        raise ShapeError('expected a 2-D stack of count vectors')
    _check_pair(counts.shape[1], probs.size)

    n = counts.sum(axis=1, keepdims=True).astype(np.float64)
    values = rel_entr(counts / n, probs).sum(axis=1)
    # the statistic is non-negative; clip float noise around exact zeros
    return np.maximum(values, 0.0)


def likelihood_ratio_statistic(x, p):
    """The G statistic 2 n KL(X/n || P)."""
    return 2.0 * x.n * empirical_kl(x, p)
