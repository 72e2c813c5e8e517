"""Certification sweeps against the exact oracle.

Each certify_* function walks a grid of (n, k, P, parameter) cells, compares
an exact quantity (lhs) with the closed-form bound it must respect (rhs) and
returns a pandas DataFrame with one row per comparison:

    check, n, k, dist, param, lhs, rhs, margin, tol, ok

margin = lhs - rhs and ok = margin <= tol. summarize() folds any number of
these frames into one row per check.
"""

import numpy as np
import pandas as pd

from relentropy import bounds
from relentropy.config import config
from relentropy.divergence import CountVector, ProbabilityVector
from relentropy.inversion import gof_pvalue
from relentropy.log import get_logger
from relentropy.oracle import binomial
from relentropy.oracle.enumeration import composition_table, enumerate_statistic, \
    exact_centered_log_mgf, exact_moments, exact_tail, mgf_representation_gap

logger = get_logger(__name__)

COLUMNS = ['check', 'n', 'k', 'dist', 'param', 'lhs', 'rhs', 'margin', 'tol', 'ok']

# Uniform plus skewed laws, including cells far below 1/k
SWEEP_DISTRIBUTIONS = {
    2: [(0.5, 0.5), (0.05, 0.95), (0.1, 0.9), (0.3, 0.7), (0.01, 0.99)],
    3: [(1.0 / 3, 1.0 / 3, 1.0 / 3), (0.1, 0.2, 0.7), (0.05, 0.05, 0.9),
        (0.2, 0.3, 0.5), (0.01, 0.49, 0.5)],
}

DOMINANCE_PS = tuple(np.round(np.arange(0.02, 0.98 + 1e-9, 0.03), 2).tolist())


def default_distributions(k):
    """Sweep distributions for alphabet size k (uniform first).

    Args:
        k: Alphabet size

    Returns:
        list of ProbabilityVector
    """
    if k in SWEEP_DISTRIBUTIONS:
        return [ProbabilityVector.from_values(v, renormalize=True) for v in SWEEP_DISTRIBUTIONS[k]]

    ramp = np.arange(1, k + 1, dtype=np.float64)
    heavy = np.full(k, 0.1 / (k - 1)) if k > 1 else np.ones(1)
    heavy[-1] = 0.9 if k > 1 else 1.0
    tiny = np.full(k, 1.0)
    tiny[0] = 0.01 * (k - 1) if k > 1 else 1.0
    return [ProbabilityVector.uniform(k)] + [
        ProbabilityVector.from_values(v, renormalize=True) for v in (ramp, heavy, tiny)
    ]


def _label(p):
    return '|'.join('{:.4g}'.format(v) for v in p.probs)


def _row(check, n, k, dist, param, lhs, rhs, tol):
    margin = lhs - rhs
    return {
        'check': check,
        'n': n,
        'k': k,
        'dist': dist,
        'param': float(param),
        'lhs': float(lhs),
        'rhs': float(rhs),
        'margin': float(margin),
        'tol': float(tol),
        'ok': bool(margin <= tol),
    }


def _frame(rows):
    return pd.DataFrame(rows, columns=COLUMNS)


def _cells(max_n, ks, dists, per_k=None):
    cells = []
    for k in ks:
        laws = dists[k] if dists and k in dists else default_distributions(k)
        if per_k is not None:
            laws = laws[:per_k]
        for n in range(1, max_n + 1):
            for p in laws:
                cells.append((n, k, p))
    return cells


def _progress(done, total, every):
    if total and done % every == 0:
        logger.info('Progress: %.1f%%', 100.0 * done / total)


def certify_mgf(max_n=12, ks=(2, 3), dists=None, points=50, tol=None, threads=None):
    """Exact centered log-MGF against mgf_bound on t in [-5n, 0.49n]."""
    tol = config.CERT_TOL_MGF if tol is None else tol
    cells = _cells(max_n, ks, dists)
    rows = []
    for done, (n, k, p) in enumerate(cells, 1):
        d = enumerate_statistic(n, p, threads=threads)
        k_eff = p.effective_k()
        ts = np.linspace(-5.0 * n, 0.49 * n, points)
        exact = exact_centered_log_mgf(d, ts)
        for t, lhs in zip(ts, exact):
            rows.append(_row('mgf', n, k_eff, _label(p), t, lhs, bounds.mgf_bound(n, k_eff, t), tol))
        _progress(done, len(cells), 25)
    return _frame(rows)


def certify_tails(max_n=12, ks=(2, 3), dists=None, points=50, eps_max=3.0, tol=None,
                  threads=None):
    """Exact tails against the tail bounds, plus the relaxation chain."""
    tol = config.CERT_TOL_TAIL if tol is None else tol
    rows = []
    for n, k, p in _cells(max_n, ks, dists):
        d = enumerate_statistic(n, p, threads=threads)
        k_eff = p.effective_k()
        mean = exact_moments(d).mean
        label = _label(p)
        for eps in np.linspace(0.0, eps_max, points):
            upper = bounds.upper_tail_bound(n, k_eff, eps)
            lower = bounds.lower_tail_bound(n, k_eff, eps)
            rows.append(_row('tail_upper', n, k_eff, label, eps,
                             exact_tail(d, mean + eps, 'upper'), upper.primary, tol))
            rows.append(_row('tail_lower', n, k_eff, label, eps,
                             exact_tail(d, mean - eps, 'lower'), lower.primary, tol))
            rows.append(_row('chain_primary_quadratic', n, k_eff, label, eps,
                             upper.primary, upper.relaxed_quadratic, tol))
            rows.append(_row('chain_quadratic_minform', n, k_eff, label, eps,
                             upper.relaxed_quadratic, upper.relaxed_minform, tol))
            rows.append(_row('chain_lower', n, k_eff, label, eps,
                             lower.primary, lower.relaxed_quadratic, tol))
    return _frame(rows)


def certify_moments(max_n=12, ks=(2, 3), dists=None, orders=(1, 2, 3), tol=None, threads=None):
    """Exact central moments, variance and mean against their bounds."""
    tol = config.CERT_TOL_TAIL if tol is None else tol
    rows = []
    for n, k, p in _cells(max_n, ks, dists):
        d = enumerate_statistic(n, p, threads=threads)
        k_eff = p.effective_k()
        label = _label(p)
        first = exact_moments(d, 1)
        rows.append(_row('variance', n, k_eff, label, 2, first.variance,
                         bounds.variance_bound(n, k_eff), tol))
        rows.append(_row('mean', n, k_eff, label, 1, first.mean,
                         bounds.mean_upper_bound(n, k_eff), tol))
        for m in orders:
            exact = exact_moments(d, m)
            rows.append(_row('central_moment', n, k_eff, label, 2 * m, exact.central_moment,
                             bounds.moment_bound(n, k_eff, m), tol))
    return _frame(rows)


def certify_representation(max_n=12, ks=(2, 3), dists=None, tol=None, threads=None):
    """|survival-integral log-MGF - direct log-MGF| at four t values."""
    tol = config.CERT_TOL_MGF if tol is None else tol
    rows = []
    for n, k, p in _cells(max_n, ks, dists):
        d = enumerate_statistic(n, p, threads=threads)
        for t in (-2.0, -0.5, 0.3, 0.9 * min(1.0, n / 2.0)):
            gap = abs(mgf_representation_gap(d, t))
            rows.append(_row('representation', n, p.effective_k(), _label(p), t, gap, 0.0, tol))
    return _frame(rows)


def certify_dominance(max_n=200, ps=DOMINANCE_PS, points=40, tol=None, envelope_tol=None):
    """Exponential domination margins and the B(t) envelope for every variable.

    For each n, p, family (half-KL, reduced phi) and side the margin must
    vanish and the exact centered log-MGF must stay below B(t) on t in
    (-20, 0.99). B(t) itself is checked against its relaxations on the same
    grid.
    """
    tol = config.CERT_TOL_MARGIN if tol is None else tol
    envelope_tol = config.CERT_TOL_MGF if envelope_tol is None else envelope_tol
    ts = np.linspace(-20.0, 0.99, points + 1)[1:]
    rows = []

    envelope = bounds.subgamma_envelope(ts)
    for t, b in zip(ts, envelope):
        relaxed = bounds.envelope_relaxations(t)
        rows.append(_row('envelope_le_intermediate', 0, 0, '', t, b, relaxed.intermediate, tol))
        rows.append(_row('intermediate_le_quadratic', 0, 0, '', t, relaxed.intermediate,
                         relaxed.quadratic, tol))
        rows.append(_row('envelope_le_gamma', 0, 0, '', t, b, relaxed.gamma, tol))

    total = max_n
    for n in range(1, max_n + 1):
        for p in ps:
            for kind in (binomial.HALFKL, binomial.REDUCED):
                for side in (binomial.PLUS, binomial.MINUS):
                    d = binomial.dominated_law(n, p, kind, side)
                    label = '{}{}(p={})'.format(kind, side, p)
                    rows.append(_row('domination', n, 2, label, p,
                                     binomial.domination_margin(d), 0.0, tol))
                    gap, worst_t = binomial.envelope_gap(d, ts)
                    rows.append(_row('envelope', n, 2, label, worst_t, gap, 0.0, envelope_tol))
        _progress(n, total, 20)
    return _frame(rows)


def certify_reduction(max_n=8, ks=(2, 3), dists=None, points=20, per_k=3, rtol=1e-12,
                      threads=None):
    """Joint centered MGF against the product of binomial factors."""
    rows = []
    for n, k, p in _cells(max_n, ks, dists, per_k=per_k):
        ts = np.linspace(-float(n), n / 2.0, points + 2)[1:-1]
        for t in ts:
            gap = binomial.reduction_gap(n, p, t, threads=threads)
            rows.append(_row('reduction', n, p.effective_k(), _label(p), t,
                             gap.lhs, gap.rhs, rtol * max(1.0, gap.rhs)))
    return _frame(rows)


def pvalue_size(n, p, alpha, threads=None):
    """Exact P(gof_pvalue <= alpha) under H0: X ~ Multinomial(n, p)."""
    counts, weights, _ = composition_table(n, p, threads=threads)
    support, keep = p.restrict()
    full = np.zeros((counts.shape[0], p.k), dtype=np.int64)
    full[:, keep] = counts
    pvalues = np.array([gof_pvalue(CountVector(tuple(row)), p).pvalue for row in full])
    return float(weights[pvalues <= alpha].sum() / weights.sum())


def certify_pvalue_validity(ns=(5, 10), ks=(2, 3), dists=None, per_k=3,
                            alphas=(0.01, 0.05, 0.1, 0.5), tol=None, threads=None):
    """Super-uniformity of gof_pvalue under H0, by enumeration."""
    tol = config.CERT_TOL_TAIL if tol is None else tol
    rows = []
    for k in ks:
        laws = dists[k] if dists and k in dists else default_distributions(k)
        for p in laws[:per_k]:
            for n in ns:
                for alpha in alphas:
                    size = pvalue_size(n, p, alpha, threads=threads)
                    rows.append(_row('pvalue_size', n, p.effective_k(), _label(p), alpha,
                                     size, alpha, tol))
    return _frame(rows)


def certify_conjecture_mgf(max_n=12, ks=(2, 3), dists=None, points=50, threads=None):
    """Exact centered log-MGF against the conjectured shape k-1 bound.

    Informational: rows that fail are counterexample candidates to an
    unproven statement, not violations of a certified bound.
    """
    rows = []
    for n, k, p in _cells(max_n, ks, dists):
        d = enumerate_statistic(n, p, threads=threads)
        k_eff = p.effective_k()
        ts = np.linspace(0.0, 0.99 * n, points)
        exact = exact_centered_log_mgf(d, ts)
        for t, lhs in zip(ts, exact):
            rhs = bounds.conjecture_mgf_bound(n, k_eff, t, experimental=True)
            rows.append(_row('conjecture_mgf', n, k_eff, _label(p), t, lhs, rhs,
                             config.CERT_TOL_MGF))
    return _frame(rows)


def summarize(frames):
    """One row per check: cells, violations and the worst margin.

    Args:
        frames: Iterable of certification DataFrames

    Returns:
        pandas.DataFrame with columns check, cells, violations, worst_margin
    """
    frames = [f for f in frames if f is not None and len(f)]
    if not frames:
        return pd.DataFrame(columns=['check', 'cells', 'violations', 'worst_margin'])
    table = pd.concat(frames, ignore_index=True)
    grouped = table.groupby('check', sort=False)
    summary = pd.DataFrame({
        'cells': grouped.size(),
        'violations': grouped['ok'].apply(lambda ok: int((~ok).sum())),
        'worst_margin': grouped['margin'].max(),
    }).reset_index()
    return summary


def violations(frames):
    """All failing rows across frames."""
    frames = [f for f in frames if f is not None and len(f)]
    if not frames:
        return _frame([])
    table = pd.concat(frames, ignore_index=True)
    return table[~table['ok']].reset_index(drop=True)
