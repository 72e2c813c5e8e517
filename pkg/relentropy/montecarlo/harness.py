"""Monte Carlo verification of the closed-form bounds.

A sweep lists cells (n, P, deviations, MGF arguments). For every cell the
statistic is sampled once and reused for all of its checks. A check fails
only when the lower confidence limit of the estimate exceeds the bound,
so a failure is evidence of a real violation at the configured confidence.

Tail checks use the threshold mean_upper_bound(n, k) + eps. Since the mean
is at most that value, P(D >= mub + eps) <= P(D >= E + eps), which the
upper tail bound controls.
"""

from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from relentropy import bounds
from relentropy.config import config
from relentropy.divergence import ProbabilityVector
from relentropy.log import get_logger
from relentropy.montecarlo.estimators import log_mgf_estimate, tail_estimate
from relentropy.montecarlo.sampler import MultinomialSampler

logger = get_logger(__name__)

COLUMNS = ['kind', 'n', 'k', 'dist', 'param', 'point', 'ci_low', 'ci_high', 'bound', 'margin',
           'ok']


@dataclass(frozen=True)
class McCell(object):
    n: int
    p: ProbabilityVector
    eps: tuple = ()
    ts: tuple = ()


@dataclass(frozen=True)
class McSweep(object):
    """Sweep description.

    bound_scale divides every bound before comparison; values above 1 turn
    the sweep into a self-test that must report violations.
    """

    cells: tuple = ()
    trials: int = 10 ** 6
    seed: int = 0
    confidence: float = field(default_factory=lambda: config.MC_CONFIDENCE)
    resamples: int = field(default_factory=lambda: config.MC_BOOTSTRAP_RESAMPLES)
    bound_scale: float = 1.0


@dataclass(frozen=True, eq=False)
class McReport(object):
    table: pd.DataFrame
    seed: int
    trials: int

    @property
    def passed(self):
        return bool(self.table['ok'].all()) if len(self.table) else True

    def violations(self):
        return self.table[~self.table['ok']].reset_index(drop=True)


def default_sweep(trials=10 ** 6, seed=0, n=1000, k=100, points=10):
    """Tail and MGF cells at (n, k) uniform.

    Args:
        trials: Draws per cell
        seed: Master seed
        n: Sample size
        k: Alphabet size
        points: Number of deviations on [0, 0.05]

    Returns:
        McSweep
    """
    cell = McCell(
        n=n,
        p=ProbabilityVector.uniform(k),
        eps=tuple(np.linspace(0.0, 0.05, points).tolist()),
        ts=(-float(n), -0.1 * n, 0.1 * n, 0.4 * n),
    )
    return McSweep(cells=(cell,), trials=trials, seed=seed)


def _label(p):
    if len(set(p.probs)) == 1:
        return 'uniform({})'.format(p.k)
    return '|'.join('{:.4g}'.format(v) for v in p.probs)


def _row(kind, cell, k, param, estimate, bound):
    margin = estimate.ci_low - bound
    return {
        'kind': kind,
        'n': cell.n,
        'k': k,
        'dist': _label(cell.p),
        'param': float(param),
        'point': estimate.point,
        'ci_low': estimate.ci_low,
        'ci_high': estimate.ci_high,
        'bound': float(bound),
        'margin': float(margin),
        'ok': bool(margin <= 0.0),
    }


def verify_bounds_mc(sweep, threads=None):
    """Run every cell of a sweep.

    Args:
        sweep: McSweep
        threads: Worker threads for sampling (results do not depend on it)

    Returns:
        McReport
    """
    rows = []
    for index, cell in enumerate(sweep.cells):
        k = cell.p.effective_k()
        logger.info('Cell %d/%d: n=%d k=%d, %d trials', index + 1, len(sweep.cells), cell.n, k,
                    sweep.trials)
        sampler = MultinomialSampler(cell.n, cell.p, sweep.seed, stream_key=index)
        values = sampler.generate(sweep.trials, threads)
        mean_bound = bounds.mean_upper_bound(cell.n, k)

        for eps in cell.eps:
            estimate = tail_estimate(values, mean_bound + eps, 'upper', sweep.seed,
                                     sweep.confidence)
            bound = bounds.upper_tail_bound(cell.n, k, eps).primary / sweep.bound_scale
            rows.append(_row('tail', cell, k, eps, estimate, bound))

        for t in cell.ts:
            estimate = log_mgf_estimate(values, t, sweep.seed, sweep.resamples, sweep.confidence)
            bound = bounds.mgf_bound(cell.n, k, t) / sweep.bound_scale
            rows.append(_row('mgf', cell, k, t, estimate, bound))

    report = McReport(table=pd.DataFrame(rows, columns=COLUMNS), seed=sweep.seed,
                      trials=sweep.trials)
    if not report.passed:
        logger.warning('%d Monte Carlo cells exceed their bound', len(report.violations()))
    return report
