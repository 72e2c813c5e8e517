"""Closed-form concentration bounds for the empirical relative entropy.

Every function takes the sample size n and the effective alphabet size k
(cells of zero hypothesised probability removed). Probability-valued bounds
are clamped to [0, 1]; products and powers are evaluated in log space.

Notation: D is the empirical relative entropy of n multinomial draws on k
cells and E its mean. The centered log-MGF log E exp(t (D - E)) is bounded
by that of a gamma law with shape 2k and rate n/2 for every t < n/2.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import gammaln

from relentropy.config import config
from relentropy.errors import DomainError

UPPER = 'upper'
LOWER = 'lower'
TWO_SIDED = 'two_sided'
SIDES = (UPPER, LOWER, TWO_SIDED)


@dataclass(frozen=True)
class BoundQuery(object):
    """Evaluation point shared by the bound formulas and the CLI echo."""

    n: int
    k: int
    t: float = 0.0
    eps: float = 0.0
    delta: float = 1.0
    m: int = 1
    q: float = 1.0

    def __post_init__(self):
        _check_nk(self.n, self.k)
        _check_eps(self.eps)
        if not 0.0 < self.delta <= 1.0:
            raise DomainError('delta must lie in (0, 1], got {!r}'.format(self.delta))
        if self.m < 1:
            raise DomainError('moment order must be >= 1, got {!r}'.format(self.m))
        if self.q < 1.0:
            raise DomainError('norm order must be >= 1, got {!r}'.format(self.q))


@dataclass(frozen=True)
class MgfBoundParts(object):
    """Branches of the centered log-MGF bound at one t.

    quadratic and gamma are the two expressions of the minimum; trivial is
    |t| (k - 1) / n for t < 0 (inf otherwise); value is the bound itself.
    """

    quadratic: float
    gamma: float
    trivial: float
    value: float


@dataclass(frozen=True)
class TailBoundReport(object):
    """Tail bound with its relaxation chain.

    value is the bound to use: for the lower side it is 0 past the
    support cutoff mean_upper_bound(n, k), otherwise equal to primary.
    """

    primary: float
    relaxed_quadratic: float
    relaxed_minform: float
    side: str
    value: float


@dataclass(frozen=True)
class EnvelopeRelaxations(object):
    intermediate: float
    quadratic: float
    gamma: float


def _check_nk(n, k):
    if int(n) != n or n < 1:
        raise DomainError('sample size n must be a positive integer, got {!r}'.format(n))
    if int(k) != k or k < 1:
        raise DomainError('alphabet size k must be a positive integer, got {!r}'.format(k))


def _check_eps(eps):
    if not 0.0 <= eps < math.inf:
        raise DomainError('eps must be finite and non-negative, got {!r}'.format(eps))


def _clamp(value):
    return min(1.0, max(0.0, value))


def _gamma_cgf(s):
    """-s - log(1 - s): centered log-MGF of Exponential(1) at s < 1."""
    return -s - math.log1p(-s)


def mgf_bound_parts(n, k, t):
    """Evaluate each branch of the centered log-MGF bound.

    Args:
        n: Sample size
        k: Effective alphabet size
        t: MGF argument, t < n/2

    Returns:
        MgfBoundParts
    """
    _check_nk(n, k)
    boundary = n / 2.0
    if t >= boundary - config.BOUNDARY_GUARD * n:
        raise DomainError(
            't={!r} is at or beyond the MGF boundary n/2={!r}'.format(t, boundary),
            boundary=boundary)

    s = 2.0 * t / n
    quadratic = k * s * s / (1.0 - s)
    gamma = 2.0 * k * _gamma_cgf(s)
    trivial = abs(t) * (k - 1) / n if t < 0 else math.inf
    value = min(quadratic, gamma, trivial)
    if t == 0:
        value = 0.0
    return MgfBoundParts(quadratic=quadratic, gamma=gamma, trivial=trivial, value=value)


def mgf_bound(n, k, t):
    """Upper bound on log E exp(t (D - E)) valid for every t < n/2."""
    return mgf_bound_parts(n, k, t).value


def conjecture_mgf_bound(n, k, t, experimental=False):
    """Conjectured shape k-1, rate n gamma bound on the centered log-MGF.

    Unproven; only available behind the experimental flag so that nothing
    certifies against it by accident.

    Args:
        n: Sample size
        k: Effective alphabet size
        t: MGF argument, 0 <= t < n
        experimental: Must be True

    Returns:
        float
    """
    if not experimental:
        raise DomainError('the shape k-1 gamma bound is conjectural; pass experimental=True')
    _check_nk(n, k)
    if t < 0 or t >= n - config.BOUNDARY_GUARD * n:
        raise DomainError('conjectured bound is stated for 0 <= t < n, got {!r}'.format(t),
                          boundary=float(n))
    return (k - 1) * _gamma_cgf(t / n)


def subgamma_envelope(t):
    """B(t): centered log-MGF bound for exponentially dominated Z >= 0.

    Args:
        t: Scalar or array, every entry < 1

    Returns:
        float or numpy.ndarray
    """
    scalar = np.ndim(t) == 0
    arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
    if np.any(arr >= 1.0) or np.any(np.isnan(arr)):
        raise DomainError('B(t) is defined for t < 1, got {!r}'.format(t), boundary=1.0)

    quad = arr * arr / (1.0 - arr)
    out = quad.copy()
    pos = arr >= 0.0
    if np.any(pos):
        tp = arr[pos]
        qp = quad[pos]
        first = np.log1p(qp - tp * tp / 5.0)
        second = np.log1p(tp / 5.0 + qp) - tp / 5.0
        out[pos] = np.maximum(first, second)
    if scalar:
        return float(out[0])
    return out


def envelope_relaxations(t):
    """The weaker closed forms dominating B(t).

    Args:
        t: Real < 1

    Returns:
        EnvelopeRelaxations: intermediate (log(1 + t^2/(1-t)) for t >= 0,
        t^2/(1-t) for t <= 0), quadratic t^2/(1-t), gamma 2 log(e^-t / (1-t))
    """
    if not t < 1.0:
        raise DomainError('relaxations are defined for t < 1, got {!r}'.format(t), boundary=1.0)
    quadratic = t * t / (1.0 - t)
    intermediate = math.log1p(quadratic) if t >= 0 else quadratic
    return EnvelopeRelaxations(
        intermediate=intermediate,
        quadratic=quadratic,
        gamma=2.0 * _gamma_cgf(t),
    )


def mean_upper_bound(n, k):
    """log(1 + (k-1)/n), an upper bound on E."""
    _check_nk(n, k)
    return math.log1p((k - 1) / float(n))


def mean_upper_bound_linear(n, k):
    """(k-1)/n, the weaker linear form of mean_upper_bound."""
    _check_nk(n, k)
    return (k - 1) / float(n)


def upper_tail_bound(n, k, eps):
    """Bounds on P(D >= E + eps).

    Args:
        n: Sample size
        k: Effective alphabet size
        eps: Deviation, >= 0

    Returns:
        TailBoundReport with side 'upper'
    """
    _check_nk(n, k)
    _check_eps(eps)
    x = n * eps
    primary = math.exp(min(0.0, 2.0 * k * math.log1p(x / (4.0 * k)) - x / 2.0))
    relaxed_quadratic = math.exp(-3.0 * x * x / (48.0 * k + 8.0 * x))
    relaxed_minform = math.exp(-min(x * x / (24.0 * k), x / 8.0))
    return TailBoundReport(
        primary=_clamp(primary),
        relaxed_quadratic=_clamp(relaxed_quadratic),
        relaxed_minform=_clamp(relaxed_minform),
        side=UPPER,
        value=_clamp(primary),
    )


def lower_tail_bound(n, k, eps):
    """Bounds on P(D <= E - eps).

    primary and relaxed_quadratic are the closed forms on 0 <= eps <= 2k/n
    and 0 beyond. value is additionally 0 once eps exceeds
    mean_upper_bound(n, k), since D >= 0.

    Returns:
        TailBoundReport with side 'lower'
    """
    _check_nk(n, k)
    _check_eps(eps)
    x = n * eps
    if eps <= 2.0 * k / n:
        u = x / (2.0 * k)
        # 1 - sqrt(1 - u) without cancellation
        gap = u / (1.0 + math.sqrt(max(0.0, 1.0 - u)))
        primary = math.exp(-k * gap * gap)
        relaxed = math.exp(-x * x / (16.0 * k))
    else:
        primary = 0.0
        relaxed = 0.0

    value = 0.0 if eps > mean_upper_bound(n, k) else primary
    return TailBoundReport(
        primary=_clamp(primary),
        relaxed_quadratic=_clamp(relaxed),
        relaxed_minform=_clamp(relaxed),
        side=LOWER,
        value=_clamp(value),
    )


def two_sided_tail_bound(n, k, eps):
    """Bounds on P(|D - E| >= eps) as the clamped sum of both sides."""
    upper = upper_tail_bound(n, k, eps)
    lower = lower_tail_bound(n, k, eps)
    return TailBoundReport(
        primary=_clamp(upper.primary + lower.primary),
        relaxed_quadratic=_clamp(upper.relaxed_quadratic + lower.relaxed_quadratic),
        relaxed_minform=_clamp(upper.relaxed_minform + lower.relaxed_minform),
        side=TWO_SIDED,
        value=_clamp(upper.value + lower.value),
    )


def tail_bound(n, k, eps, side=UPPER):
    """Dispatch to the tail bound for `side`."""
    if side == UPPER:
        return upper_tail_bound(n, k, eps)
    if side == LOWER:
        return lower_tail_bound(n, k, eps)
    if side == TWO_SIDED:
        return two_sided_tail_bound(n, k, eps)
    raise DomainError('side must be one of {}, got {!r}'.format(SIDES, side))


def conjecture_form_bound(n, k, eps):
    """min(1, 2 exp(-min(n^2 eps^2 / (k-1), n eps) / 48)) on P(|D - E| >= eps)."""
    _check_nk(n, k)
    _check_eps(eps)
    if k < 2:
        raise DomainError('the two-sided form needs k >= 2, got {}'.format(k))
    x = n * eps
    rate = min(x * x / (k - 1), x) / 48.0
    return _clamp(2.0 * math.exp(-rate))


def moment_bound(n, k, m):
    """Bound 2^(6m) (k^m m! + (2m)!) / n^(2m) on E (D - E)^(2m)."""
    _check_nk(n, k)
    if int(m) != m or m < 1:
        raise DomainError('moment order m must be a positive integer, got {!r}'.format(m))
    log_sum = np.logaddexp(m * math.log(k) + gammaln(m + 1), gammaln(2 * m + 1))
    return math.exp(6 * m * math.log(2.0) + float(log_sum) - 2 * m * math.log(n))


def qnorm_bound(n, k, q):
    """Bound (24/n)(sqrt(kq) + q) on the L^q norm of D - E, real q >= 1."""
    _check_nk(n, k)
    if not q >= 1.0:
        raise DomainError('norm order q must be >= 1, got {!r}'.format(q))
    return 24.0 / n * (math.sqrt(k * q) + q)


def variance_bound(n, k):
    """8k / n^2."""
    _check_nk(n, k)
    return 8.0 * k / (n * n)


def log_types_count(n, k):
    """log C(n+k-1, k-1), the log number of types."""
    _check_nk(n, k)
    return float(gammaln(n + k) - gammaln(k) - gammaln(n + 1))


def types_bound(n, k, eps):
    """Method-of-types bound min(1, C(n+k-1, k-1) exp(-n eps)) on P(D >= eps)."""
    _check_eps(eps)
    return math.exp(min(0.0, log_types_count(n, k) - n * eps))


def chernoff_tail(log_mgf, eps, t_max):
    """Numeric convex conjugate inf_{0<t<t_max} exp(log_mgf(t) - t eps).

    Args:
        log_mgf: Callable bound on the centered log-MGF, finite on (0, t_max)
        eps: Deviation, >= 0
        t_max: Open upper end of the MGF domain

    Returns:
        float in [0, 1]
    """
    _check_eps(eps)
    upper = t_max * (1.0 - 1e-7)

    def objective(t):
        return log_mgf(t) - t * eps

    result = minimize_scalar(objective, bounds=(0.0, upper), method='bounded',
                             options={'xatol': 1e-12 * upper, 'maxiter': 500})
    best = min(0.0, float(result.fun))
    return _clamp(math.exp(best))
