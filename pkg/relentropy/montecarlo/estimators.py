"""Monte Carlo estimators with confidence intervals.

Tail probabilities get exact Clopper-Pearson intervals; the centered
log-MGF functional gets a seeded percentile bootstrap.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp
from scipy.stats import beta, bootstrap

from relentropy.config import config
from relentropy.errors import DomainError
from relentropy.montecarlo.sampler import MultinomialSampler, block_stream

# stream key of the bootstrap resampler, apart from every sampling stream
BOOTSTRAP_KEY = 2 ** 32 - 1


@dataclass(frozen=True)
class McEstimate(object):
    point: float
    ci_low: float
    ci_high: float
    trials: int
    seed: int
    confidence: float


def clopper_pearson(successes, trials, confidence=None):
    """Exact binomial confidence interval for successes / trials.

    Args:
        successes: Number of successes
        trials: Number of trials
        confidence: Two-sided coverage (config.MC_CONFIDENCE)

    Returns:
        tuple: (low, high)
    """
    confidence = config.MC_CONFIDENCE if confidence is None else confidence
    if trials < 1 or not 0 <= successes <= trials:
        raise DomainError('need 0 <= successes <= trials and trials >= 1')
    alpha = 1.0 - confidence
    low = 0.0 if successes == 0 else float(beta.ppf(alpha / 2, successes, trials - successes + 1))
    high = 1.0 if successes == trials else float(
        beta.ppf(1 - alpha / 2, successes + 1, trials - successes))
    return low, high


def tail_estimate(values, threshold, side, seed, confidence=None):
    """Clopper-Pearson estimate of P(V >= threshold) or P(V <= threshold)."""
    if side == 'upper':
        hits = int(np.count_nonzero(values >= threshold))
    elif side == 'lower':
        hits = int(np.count_nonzero(values <= threshold))
    else:
        raise DomainError('side must be upper or lower, got {!r}'.format(side))
    confidence = config.MC_CONFIDENCE if confidence is None else confidence
    trials = int(values.size)
    low, high = clopper_pearson(hits, trials, confidence)
    return McEstimate(point=hits / trials, ci_low=low, ci_high=high, trials=trials, seed=seed,
                      confidence=confidence)


def estimate_tail(n, p, threshold, side, trials, seed, confidence=None, threads=None,
                  stream_key=0):
    """Estimate P(D >= threshold) ('upper') or P(D <= threshold) ('lower').

    Args:
        n: Sample size
        p: ProbabilityVector
        threshold: Statistic level
        side: 'upper' or 'lower'
        trials: Number of draws
        seed: Master seed
        confidence: Interval coverage (config.MC_CONFIDENCE)
        threads: Worker threads
        stream_key: Key separating experiments sharing a seed

    Returns:
        McEstimate
    """
    values = MultinomialSampler(n, p, seed, stream_key=stream_key).generate(trials, threads)
    return tail_estimate(values, threshold, side, seed, confidence)


def _log_mgf_functional(t):
    def functional(sample, axis=-1):
        size = sample.shape[axis]
        return logsumexp(t * sample, axis=axis) - math.log(size) - t * np.mean(sample, axis=axis)
    return functional


def log_mgf_estimate(values, t, seed, resamples=None, confidence=None):
    """Bootstrap estimate of log mean exp(t V) - t mean V."""
    resamples = resamples or config.MC_BOOTSTRAP_RESAMPLES
    confidence = config.MC_CONFIDENCE if confidence is None else confidence
    trials = int(values.size)
    if t == 0:
        return McEstimate(point=0.0, ci_low=0.0, ci_high=0.0, trials=trials, seed=seed,
                          confidence=confidence)

    functional = _log_mgf_functional(t)
    point = float(functional(values))
    if trials == 1 or np.all(values == values[0]):
        return McEstimate(point=point, ci_low=point, ci_high=point, trials=trials, seed=seed,
                          confidence=confidence)

    result = bootstrap(
        (values,),
        functional,
        n_resamples=resamples,
        batch=max(1, int(4e6 // trials)),
        confidence_level=confidence,
        method='percentile',
        vectorized=True,
        random_state=block_stream(seed, 0, BOOTSTRAP_KEY),
    )
    # the percentile interval need not contain the plug-in estimate
    low = min(float(result.confidence_interval.low), point)
    high = max(float(result.confidence_interval.high), point)
    return McEstimate(point=point, ci_low=low, ci_high=high, trials=trials, seed=seed,
                      confidence=confidence)


def estimate_centered_log_mgf(n, p, t, trials, seed, resamples=None, confidence=None,
                              threads=None, stream_key=0):
    """Estimate log E exp(t (D - E D)) with a bootstrap interval.

    Args:
        n: Sample size
        p: ProbabilityVector
        t: MGF argument, t < n/2
        trials: Number of draws
        seed: Master seed (also seeds the bootstrap)
        resamples: Bootstrap resamples (config.MC_BOOTSTRAP_RESAMPLES)
        confidence: Interval coverage (config.MC_CONFIDENCE)
        threads: Worker threads
        stream_key: Key separating experiments sharing a seed

    Returns:
        McEstimate
    """
    if t >= n / 2.0:
        raise DomainError('t must be below n/2={!r}, got {!r}'.format(n / 2.0, t),
                          boundary=n / 2.0)
    if trials < 1:
        raise DomainError('trials must be at least 1, got {!r}'.format(trials))
    if t == 0:
        confidence = config.MC_CONFIDENCE if confidence is None else confidence
        return McEstimate(point=0.0, ci_low=0.0, ci_high=0.0, trials=trials, seed=seed,
                          confidence=confidence)
    values = MultinomialSampler(n, p, seed, stream_key=stream_key).generate(trials, threads)
    return log_mgf_estimate(values, t, seed, resamples, confidence)
