"""Seeded multinomial sampler.

Draws count vectors by sequential conditional binomials:
X_1 ~ Bin(n, p_1), X_2 ~ Bin(n - X_1, p_2 / (1 - p_1)), ... The binomial
variates come from numpy's exact generator (inversion / BTPE), never a
normal approximation.

Trials are cut into blocks of fixed size; block b draws from its own
Philox stream keyed by (seed, stream_key, b). Block boundaries do not
depend on the number of threads, so the statistics are bit-identical for
any worker count.
"""

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from relentropy.config import config
from relentropy.divergence import CountVector, ProbabilityVector, empirical_kl_batch
from relentropy.errors import DomainError
from relentropy.log import get_logger

logger = get_logger(__name__)


def block_stream(seed, block, stream_key=0):
    """Counter-based substream for one block of trials.

    Args:
        seed: Master seed (unsigned 64-bit integer)
        block: Block index
        stream_key: Extra key separating independent experiments

    Returns:
        numpy.random.Generator backed by Philox
    """
    if seed is None or seed < 0:
        raise DomainError('a non-negative integer seed is required, got {!r}'.format(seed))
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, stream_key, block])))


def _conditional_probs(probs):
    """p_i / (p_i + ... + p_k), from compensated suffix sums."""
    suffix = [math.fsum(probs[i:]) for i in range(len(probs))]
    return [min(1.0, v / s) if s > 0.0 else 0.0 for v, s in zip(probs, suffix)]


def sample_count_matrix(n, p, stream, size):
    """Draw `size` multinomial count vectors at once.

    Args:
        n: Sample size
        p: ProbabilityVector
        stream: numpy.random.Generator
        size: Number of draws

    Returns:
        numpy.ndarray of shape (size, k), each row summing to n
    """
    probs = list(p.probs)
    k = len(probs)
    conditional = _conditional_probs(probs)
    counts = np.zeros((size, k), dtype=np.int64)
    remaining = np.full(size, n, dtype=np.int64)
    for i in range(k - 1):
        drawn = stream.binomial(remaining, conditional[i])
        counts[:, i] = drawn
        remaining -= drawn
    counts[:, k - 1] = remaining
    return counts


def sample_counts(n, p, stream):
    """One multinomial draw.

    Args:
        n: Sample size
        p: ProbabilityVector
        stream: numpy.random.Generator

    Returns:
        CountVector
    """
    return CountVector(tuple(sample_count_matrix(n, p, stream, 1)[0].tolist()))


class MultinomialSampler(object):
    """Generates empirical relative entropy draws for Multinomial(n, p)."""

    def __init__(self, n, p, seed, stream_key=0, block_size=None):
        """Initialize sampler.

        Args:
            n: Sample size
            p: ProbabilityVector
            seed: Master seed
            stream_key: Key separating experiments sharing a seed
            block_size: Trials per block (config.MC_BLOCK_SIZE)
        """
        if int(n) != n or n < 1:
            raise DomainError('sample size must be a positive integer, got {!r}'.format(n))
        if not isinstance(p, ProbabilityVector):
            raise DomainError('p must be a ProbabilityVector')
        self.n = int(n)
        self.p = p
        self.seed = seed
        self.stream_key = stream_key
        self.block_size = block_size or config.MC_BLOCK_SIZE
        block_stream(seed, 0, stream_key)

    def _blocks(self, trials):
        full, rest = divmod(trials, self.block_size)
        sizes = [self.block_size] * full + ([rest] if rest else [])
        return list(enumerate(sizes))

    def _block_statistics(self, block):
        index, size = block
        stream = block_stream(self.seed, index, self.stream_key)
        counts = sample_count_matrix(self.n, self.p, stream, size)
        return empirical_kl_batch(counts, self.p.as_array())

    def generate(self, trials, threads=None):
        """Draw `trials` statistics.

        Args:
            trials: Number of draws, >= 1
            threads: Worker threads (config.THREADS)

        Returns:
            numpy.ndarray of empirical relative entropies in trial order
        """
        if trials < 1:
            raise DomainError('trials must be at least 1, got {!r}'.format(trials))
        threads = threads or config.THREADS
        blocks = self._blocks(trials)
        logger.debug('Sampling %d trials of n=%d k=%d in %d blocks', trials, self.n, self.p.k,
                     len(blocks))

        if threads > 1 and len(blocks) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                parts = list(pool.map(self._block_statistics, blocks))
        else:
            parts = [self._block_statistics(b) for b in blocks]
        return np.concatenate(parts)
