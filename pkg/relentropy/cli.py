"""Command-line surface: `python -m relentropy <command> <quantity> [options]`.

Each leaf command maps to a handler that returns a RunReport; run() writes
it to stdout as JSON (default) or CSV and turns the outcome into an exit
code (0 ok, 1 certified inequality violated, 2 bad invocation).
"""

import argparse
import dataclasses
import sys

import numpy as np
import pandas as pd

from relentropy import bounds, log
from relentropy.config import config
from relentropy.divergence import CountVector, ProbabilityVector
from relentropy.errors import EXIT_OK, EXIT_USAGE, RelentropyError, VerificationFailure
from relentropy.inversion import confidence_radius, gof_pvalue, sample_size
from relentropy.montecarlo.harness import default_sweep, verify_bounds_mc
from relentropy.oracle import certify
from relentropy.report import RunReport

logger = log.get_logger(__name__)

# parsed attributes that steer the run but are not part of its inputs
_NOT_ECHOED = ('handler', 'format', 'threads', 'verbose', 'quiet', 'command', 'quantity')


def _int_list(text):
    try:
        return tuple(int(v) for v in text.split(',') if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError('expected comma separated integers, got {!r}'.format(text))


def _float_list(text):
    try:
        return tuple(float(v) for v in text.split(',') if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError('expected comma separated numbers, got {!r}'.format(text))


def _seed(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError('seed must be an integer, got {!r}'.format(text))
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(
            'seed must be an unsigned 64-bit integer, got {}'.format(value))
    return value


def _column(path):
    """First column of a headerless text file."""
    return pd.read_csv(path, header=None).iloc[:, 0].tolist()


def _inputs(args):
    return {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_ECHOED}


def _report(args, outputs, seed=None):
    return RunReport(command=' '.join(filter(None, [args.command, getattr(args, 'quantity', None)])),
                     inputs=_inputs(args), outputs=outputs, seed=seed)


def _fields(obj):
    return dataclasses.asdict(obj)


# -- bound -------------------------------------------------------------------

def _bound_mgf(args):
    return _report(args, _fields(bounds.mgf_bound_parts(args.n, args.k, args.t)))


def _bound_tail(args):
    return _report(args, _fields(bounds.tail_bound(args.n, args.k, args.eps, args.side)))


def _bound_moment(args):
    outputs = {
        'moment': bounds.moment_bound(args.n, args.k, args.m),
        'variance': bounds.variance_bound(args.n, args.k),
    }
    if args.q is not None:
        outputs['qnorm'] = bounds.qnorm_bound(args.n, args.k, args.q)
    return _report(args, outputs)


def _bound_mean(args):
    return _report(args, {
        'log_form': bounds.mean_upper_bound(args.n, args.k),
        'linear_form': bounds.mean_upper_bound_linear(args.n, args.k),
    })


def _bound_types(args):
    return _report(args, {
        'value': bounds.types_bound(args.n, args.k, args.eps),
        'log_count': bounds.log_types_count(args.n, args.k),
    })


def _bound_conjecture(args):
    return _report(args, {'value': bounds.conjecture_form_bound(args.n, args.k, args.eps)})


def _bound_chernoff(args):
    n, k = args.n, args.k
    if args.mgf == 'gamma':
        value = bounds.chernoff_tail(lambda t: bounds.mgf_bound_parts(n, k, t).gamma,
                                     args.eps, n / 2.0)
    else:
        value = bounds.chernoff_tail(
            lambda t: bounds.conjecture_mgf_bound(n, k, t, experimental=args.experimental),
            args.eps, float(n))
    return _report(args, {
        'value': value,
        'closed_form': bounds.upper_tail_bound(n, k, args.eps).primary,
    })


def _envelope(args):
    outputs = {'value': bounds.subgamma_envelope(args.t)}
    outputs.update(_fields(bounds.envelope_relaxations(args.t)))
    return _report(args, outputs)


# -- invert / test ------------------------------------------------------------

def _invert_radius(args):
    return _report(args, _fields(confidence_radius(args.n, args.k, args.delta, args.side)))


def _invert_samplesize(args):
    n = sample_size(args.k, args.eps, args.delta, args.side)
    return _report(args, {
        'n': n,
        'achieved_bound': bounds.tail_bound(n, args.k, args.eps, args.side).value,
    })


def _test_gof(args):
    counts = args.counts if args.counts is not None else _column(args.counts_file)
    probs = args.p if args.p is not None else _column(args.p_file)
    x = CountVector(tuple(counts))
    p0 = ProbabilityVector.from_values(probs, renormalize=args.renormalize)
    return _report(args, _fields(gof_pvalue(x, p0)))


# -- verify -------------------------------------------------------------------

def _verification(args, frames, seed=None, extra=None):
    summary = certify.summarize(frames)
    failing = certify.violations(frames)
    outputs = {
        'passed': bool(len(failing) == 0),
        'violations_count': int(len(failing)),
        'table': summary,
        'violations': failing,
    }
    outputs.update(extra or {})
    return _report(args, outputs, seed=seed)


def _exact_frames(args):
    ks = args.k
    logger.info('Exact sweep n=1..%d, k=%s', args.max_n, ','.join(str(k) for k in ks))
    return [
        certify.certify_mgf(args.max_n, ks, points=args.points, threads=args.threads),
        certify.certify_tails(args.max_n, ks, points=args.points, threads=args.threads),
        certify.certify_moments(args.max_n, ks, threads=args.threads),
        certify.certify_representation(args.max_n, ks, threads=args.threads),
        certify.certify_pvalue_validity(ks=ks, threads=args.threads),
    ]


def _conjecture_summary(args):
    frame = certify.certify_conjecture_mgf(args.max_n, args.k, points=args.points,
                                           threads=args.threads)
    exceed = int((~frame['ok']).sum())
    if exceed:
        logger.warning('Conjectured MGF bound exceeded at %d of %d points', exceed, len(frame))
    return {'conjecture': {'cells': int(len(frame)), 'exceedances': exceed}}


def _verify_exact(args):
    extra = _conjecture_summary(args) if args.experimental else None
    return _verification(args, _exact_frames(args), extra=extra)


def _verify_dominance(args):
    return _verification(args, [certify.certify_dominance(args.max_n, points=args.points)])


def _verify_reduction(args):
    return _verification(args, [certify.certify_reduction(args.max_n, args.k, points=args.points,
                                                          threads=args.threads)])


def _mc_report(args):
    sweep = default_sweep(trials=args.trials, seed=args.seed, n=args.n, k=args.mc_k,
                          points=args.eps_points)
    if args.bound_scale != 1.0:
        sweep = dataclasses.replace(sweep, bound_scale=args.bound_scale)
    return verify_bounds_mc(sweep, threads=args.threads)


def _verify_mc(args):
    mc = _mc_report(args)
    return _report(args, {
        'passed': mc.passed,
        'violations_count': int(len(mc.violations())),
        'table': mc.table,
    }, seed=args.seed)


def _verify_all(args):
    frames = _exact_frames(args)
    frames.append(certify.certify_dominance(args.dominance_max_n, points=args.points))
    frames.append(certify.certify_reduction(args.reduction_max_n, args.k, threads=args.threads))
    mc = _mc_report(args)
    mc_frame = mc.table.rename(columns={'kind': 'check', 'ci_low': 'lhs', 'bound': 'rhs'})
    mc_frame['check'] = 'mc_' + mc_frame['check']
    mc_frame['tol'] = 0.0
    frames.append(mc_frame[certify.COLUMNS])
    return _verification(args, frames, seed=args.seed)


# -- curve --------------------------------------------------------------------

def _curve_tail(args):
    rows = []
    for eps in np.linspace(0.0, args.eps_max, args.points):
        report = bounds.tail_bound(args.n, args.k, eps, args.side)
        rows.append({'param': eps, 'value': report.value, 'primary': report.primary,
                     'relaxed_quadratic': report.relaxed_quadratic,
                     'relaxed_minform': report.relaxed_minform,
                     'types': bounds.types_bound(args.n, args.k, eps)})
    return _report(args, {'table': pd.DataFrame(rows)})


def _curve_mgf(args):
    rows = []
    for t in np.linspace(-5.0 * args.n, 0.49 * args.n, args.points):
        parts = bounds.mgf_bound_parts(args.n, args.k, t)
        rows.append({'param': t, 'value': parts.value, 'quadratic': parts.quadratic,
                     'gamma': parts.gamma, 'trivial': parts.trivial})
    return _report(args, {'table': pd.DataFrame(rows)})


def _curve_envelope(args):
    ts = np.linspace(args.t_min, args.t_max, args.points)
    rows = []
    for t, b in zip(ts, bounds.subgamma_envelope(ts)):
        relaxed = bounds.envelope_relaxations(t)
        rows.append({'param': t, 'value': b, 'intermediate': relaxed.intermediate,
                     'quadratic': relaxed.quadratic, 'gamma': relaxed.gamma})
    return _report(args, {'table': pd.DataFrame(rows)})


def _curve_types(args):
    rows = []
    for eps in np.linspace(0.0, args.eps_max, args.points):
        rows.append({'param': eps, 'value': bounds.types_bound(args.n, args.k, eps),
                     'upper_primary': bounds.upper_tail_bound(args.n, args.k, eps).primary})
    return _report(args, {'table': pd.DataFrame(rows)})


# -- parser -------------------------------------------------------------------

def _common(fmt='json'):
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=('json', 'csv'), default=fmt)
    common.add_argument('--threads', type=int, default=None,
                        help='worker threads (results do not depend on it)')
    common.add_argument('-v', '--verbose', action='count', default=0)
    common.add_argument('-q', '--quiet', action='store_true')
    return common


def _leaf(group, name, handler, common, help_text):
    parser = group.add_parser(name, parents=[common], help=help_text)
    parser.set_defaults(handler=handler)
    return parser


def _nk(parser, k_default=None):
    parser.add_argument('--n', type=int, required=True)
    if k_default is None:
        parser.add_argument('--k', type=int, required=True)
    else:
        parser.add_argument('--k', type=int, default=k_default)


def _side(parser):
    parser.add_argument('--side', choices=bounds.SIDES, default=bounds.UPPER)


def _mc_options(parser):
    parser.add_argument('--seed', type=_seed, required=True)
    parser.add_argument('--trials', type=int, default=10 ** 6)
    parser.add_argument('--mc-n', dest='n', type=int, default=1000)
    parser.add_argument('--mc-k', type=int, default=100)
    parser.add_argument('--eps-points', type=int, default=10)
    parser.add_argument('--bound-scale', type=float, default=1.0,
                        help='divide every bound by this factor (self-test)')


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(
        prog='relentropy',
        description='Concentration bounds for the empirical relative entropy.')
    parser.add_argument('--version', action='version', version=config.VERSION)
    commands = parser.add_subparsers(dest='command', required=True)

    bound = commands.add_parser('bound', help='closed-form bounds')
    quantities = bound.add_subparsers(dest='quantity', required=True)
    p = _leaf(quantities, 'mgf', _bound_mgf, common, 'centered log-MGF bound')
    _nk(p)
    p.add_argument('--t', type=float, required=True)
    p = _leaf(quantities, 'tail', _bound_tail, common, 'tail bounds with relaxations')
    _nk(p)
    p.add_argument('--eps', type=float, required=True)
    _side(p)
    p = _leaf(quantities, 'moment', _bound_moment, common, 'central moment and variance bounds')
    _nk(p)
    p.add_argument('--m', type=int, default=1)
    p.add_argument('--q', type=float, default=None)
    p = _leaf(quantities, 'mean', _bound_mean, common, 'upper bounds on the mean')
    _nk(p)
    p = _leaf(quantities, 'types', _bound_types, common, 'method-of-types bound')
    _nk(p)
    p.add_argument('--eps', type=float, required=True)
    p = _leaf(quantities, 'conjecture', _bound_conjecture, common, 'two-sided conjectured form')
    _nk(p)
    p.add_argument('--eps', type=float, required=True)
    p = _leaf(quantities, 'chernoff', _bound_chernoff, common, 'numeric Chernoff conjugate')
    _nk(p)
    p.add_argument('--eps', type=float, required=True)
    p.add_argument('--mgf', choices=('gamma', 'conjecture'), default='gamma')
    p.add_argument('--experimental', action='store_true')

    p = commands.add_parser('envelope', parents=[common], help='subgamma envelope B(t)')
    p.set_defaults(handler=_envelope)
    p.add_argument('--t', type=float, required=True)

    invert = commands.add_parser('invert', help='invert the tail bounds')
    quantities = invert.add_subparsers(dest='quantity', required=True)
    p = _leaf(quantities, 'radius', _invert_radius, common, 'confidence radius')
    _nk(p)
    p.add_argument('--delta', type=float, required=True)
    _side(p)
    p = _leaf(quantities, 'samplesize', _invert_samplesize, common, 'minimal sample size')
    p.add_argument('--k', type=int, required=True)
    p.add_argument('--eps', type=float, required=True)
    p.add_argument('--delta', type=float, required=True)
    _side(p)

    test = commands.add_parser('test', help='hypothesis tests')
    quantities = test.add_subparsers(dest='quantity', required=True)
    p = _leaf(quantities, 'gof', _test_gof, common, 'goodness-of-fit p-value')
    counts = p.add_mutually_exclusive_group(required=True)
    counts.add_argument('--counts', type=_int_list)
    counts.add_argument('--counts-file')
    probs = p.add_mutually_exclusive_group(required=True)
    probs.add_argument('--p', type=_float_list)
    probs.add_argument('--p-file')
    p.add_argument('--renormalize', action='store_true')

    verify = commands.add_parser('verify', help='certify the bounds')
    quantities = verify.add_subparsers(dest='quantity', required=True)
    p = _leaf(quantities, 'exact', _verify_exact, common, 'exact enumeration sweep')
    p.add_argument('--max-n', type=int, default=12)
    p.add_argument('--k', type=_int_list, default=(2, 3))
    p.add_argument('--points', type=int, default=50)
    p.add_argument('--experimental', action='store_true',
                   help='also compare against the conjectured MGF bound (informational)')
    p = _leaf(quantities, 'dominance', _verify_dominance, common, 'binomial domination sweep')
    p.add_argument('--max-n', type=int, default=200)
    p.add_argument('--points', type=int, default=40)
    p = _leaf(quantities, 'reduction', _verify_reduction, common, 'product reduction sweep')
    p.add_argument('--max-n', type=int, default=8)
    p.add_argument('--k', type=_int_list, default=(2, 3))
    p.add_argument('--points', type=int, default=20)
    p = _leaf(quantities, 'mc', _verify_mc, common, 'Monte Carlo sweep')
    _mc_options(p)
    p = _leaf(quantities, 'all', _verify_all, common, 'every engine in turn')
    p.add_argument('--max-n', type=int, default=12)
    p.add_argument('--k', type=_int_list, default=(2, 3))
    p.add_argument('--points', type=int, default=50)
    p.add_argument('--dominance-max-n', type=int, default=200)
    p.add_argument('--reduction-max-n', type=int, default=8)
    _mc_options(p)

    # curves default to CSV
    common = _common('csv')
    curve = commands.add_parser('curve', help='plot-ready CSV sweeps')
    quantities = curve.add_subparsers(dest='quantity', required=True)
    p = _leaf(quantities, 'tail', _curve_tail, common, 'tail bounds over eps')
    _nk(p)
    p.add_argument('--eps-max', type=float, default=1.0)
    _side(p)
    p = _leaf(quantities, 'mgf', _curve_mgf, common, 'MGF bound branches over t')
    _nk(p)
    p = _leaf(quantities, 'envelope', _curve_envelope, common, 'B(t) and its relaxations')
    p.add_argument('--t-min', type=float, default=-20.0)
    p.add_argument('--t-max', type=float, default=0.99)
    p = _leaf(quantities, 'types', _curve_types, common, 'method-of-types against the tail bound')
    _nk(p)
    p.add_argument('--eps-max', type=float, default=1.0)
    for sub in quantities.choices.values():
        sub.add_argument('--points', type=int, default=100)

    return parser


def _emit(report, fmt, stdout):
    if fmt == 'csv':
        stdout.write(report.to_csv())
    else:
        stdout.write(report.to_json() + '\n')
    stdout.flush()


def run(argv, stdout=None):
    """Parse argv, run the command and write its report.

    Args:
        argv: Arguments without the program name
        stdout: Output stream (sys.stdout)

    Returns:
        int: exit code
    """
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK

    log.configure(-1 if args.quiet else args.verbose)
    is_valid, problems = config.validate()
    if not is_valid:
        for problem in problems:
            logger.error('Invalid configuration: %s', problem)
        return EXIT_USAGE

    try:
        report = args.handler(args)
        _emit(report, args.format, stdout)
        if report.outputs.get('passed') is False:
            raise VerificationFailure(
                '{} certified comparisons failed'.format(report.outputs.get('violations_count')),
                report.outputs.get('violations'))
    except VerificationFailure as exc:
        logger.error('Verification failed: %s', exc)
        return exc.exit_code
    except RelentropyError as exc:
        logger.error('%s', exc)
        return exc.exit_code
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        logger.error('Cannot read input: %s', exc)
        return EXIT_USAGE
    except Exception:
        logger.exception('Unexpected error')
        return EXIT_USAGE
    return EXIT_OK


def main():
    sys.exit(run(sys.argv[1:]))
