import io
import json
import math

import pytest

from relentropy.cli import run
from relentropy.errors import EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION


def _run(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    return code, out.getvalue()


def _json(*argv):
    code, text = _run(*argv)
    assert code == EXIT_OK, text
    return json.loads(text)


def test_bound_tail_upper():
    report = _json('bound', 'tail', '--n', '10', '--k', '2', '--eps', '0.5', '--side', 'upper')
    assert report['command'] == 'bound tail'
    assert report['inputs'] == {'n': 10, 'k': 2, 'eps': 0.5, 'side': 'upper'}
    assert report['outputs']['primary'] == pytest.approx(1.625 ** 4 * math.exp(-2.5), rel=1e-9)


def test_bound_tail_at_zero():
    report = _json('bound', 'tail', '--n', '10', '--k', '2', '--eps', '0')
    assert report['outputs']['primary'] == 1.0


def test_bound_tail_csv_matches_json():
    argv = ['bound', 'tail', '--n', '10', '--k', '2', '--eps', '0.5']
    as_json = _json(*argv)['outputs']
    code, text = _run(*(argv + ['--format', 'csv']))
    assert code == EXIT_OK
    header, row = text.strip('\n').split('\n')
    for name, value in zip(header.split(','), row.split(',')):
        if name == 'side':
            assert value == as_json[name]
        else:
            assert float(value) == as_json[name]


@pytest.mark.parametrize('argv,key,expected', [
    (['bound', 'mgf', '--n', '2', '--k', '2', '--t', '0.5'], 'value', 4 * (math.log(2) - 0.5)),
    (['bound', 'moment', '--n', '10', '--k', '2', '--m', '1'], 'moment', 2.56),
    (['bound', 'moment', '--n', '10', '--k', '2'], 'variance', 0.16),
    (['bound', 'mean', '--n', '10', '--k', '2'], 'log_form', math.log(1.1)),
    (['bound', 'types', '--n', '10', '--k', '2', '--eps', '0.5'], 'value', 11 * math.exp(-5)),
    (['bound', 'conjecture', '--n', '1000', '--k', '2', '--eps', '0.5'], 'value',
     2 * math.exp(-500 / 48)),
    (['envelope', '--t', '0.5'], 'value', math.log(1.45)),
])
def test_bound_commands(argv, key, expected):
    assert _json(*argv)['outputs'][key] == pytest.approx(expected, rel=1e-9)


def test_bound_chernoff():
    outputs = _json('bound', 'chernoff', '--n', '10', '--k', '2', '--eps', '0.5')['outputs']
    assert outputs['value'] == pytest.approx(outputs['closed_form'], rel=1e-6)


def test_json_is_default_next_to_csv_curves():
    code, text = _run('bound', 'tail', '--n', '10', '--k', '2', '--eps', '0.5', '--side', 'upper')
    assert code == EXIT_OK
    assert json.loads(text)['outputs']['side'] == 'upper'
    code, text = _run('envelope', '--t', '0.5')
    assert code == EXIT_OK
    assert json.loads(text)['outputs']['value'] == pytest.approx(0.3715636, rel=1e-6)
    code, text = _run('curve', 'envelope', '--points', '3', '--format', 'json')
    assert code == EXIT_OK
    assert len(json.loads(text)['outputs']['table']) == 3


def test_seed_must_fit_64_bits():
    argv = ['verify', 'mc', '--trials', '100', '--mc-n', '10', '--mc-k', '2', '--eps-points', '1']
    assert _run(*(argv + ['--seed', str(2 ** 64)]))[0] == EXIT_USAGE
    assert _run(*(argv + ['--seed', '-1']))[0] == EXIT_USAGE


def test_chernoff_conjecture_needs_flag():
    argv = ['bound', 'chernoff', '--n', '10', '--k', '2', '--eps', '0.5', '--mgf', 'conjecture']
    assert _run(*argv)[0] == EXIT_USAGE
    assert _run(*(argv + ['--experimental']))[0] == EXIT_OK


def test_mgf_boundary_is_usage_error():
    code, text = _run('bound', 'mgf', '--n', '10', '--k', '2', '--t', '5')
    assert code == EXIT_USAGE
    assert text == ''


def test_unknown_flag():
    assert _run('bound', 'tail', '--n', '10', '--k', '2', '--eps', '0.1', '--bogus')[0] == EXIT_USAGE
    assert _run('frobnicate')[0] == EXIT_USAGE


def test_invert_radius():
    outputs = _json('invert', 'radius', '--n', '100', '--k', '5', '--delta', '0.05')['outputs']
    assert 0.05 * (1 - 1e-6) <= outputs['achieved_bound'] <= 0.05


def test_invert_samplesize():
    outputs = _json('invert', 'samplesize', '--k', '5', '--eps', '0.1', '--delta', '0.05')['outputs']
    assert outputs['achieved_bound'] <= 0.05
    assert outputs['n'] >= 1


def test_gof_inline():
    outputs = _json('test', 'gof', '--counts', '8,2', '--p', '0.5,0.5')['outputs']
    assert outputs['statistic'] == pytest.approx(0.8 * math.log(1.6) + 0.2 * math.log(0.4))
    assert outputs['pvalue'] == pytest.approx(0.9729, abs=5e-4)


def test_gof_files(tmp_path):
    counts = tmp_path / 'counts.txt'
    counts.write_text('90\n10\n')
    probs = tmp_path / 'p.txt'
    probs.write_text('1\n1\n')
    outputs = _json('test', 'gof', '--counts-file', str(counts), '--p-file', str(probs),
                    '--renormalize')['outputs']
    assert outputs['pvalue'] == pytest.approx(1.04e-14, rel=0.01)


def test_gof_errors(tmp_path):
    assert _run('test', 'gof', '--counts', '8,2', '--p', '0.5,0.6')[0] == EXIT_USAGE
    assert _run('test', 'gof', '--counts', '8,2,1', '--p', '0.5,0.5')[0] == EXIT_USAGE
    missing = str(tmp_path / 'nope.txt')
    assert _run('test', 'gof', '--counts-file', missing, '--p', '0.5,0.5')[0] == EXIT_USAGE


def test_randomized_commands_require_seed():
    assert _run('verify', 'mc', '--trials', '100')[0] == EXIT_USAGE
    assert _run('verify', 'all')[0] == EXIT_USAGE


def test_verify_exact_small():
    report = _json('verify', 'exact', '--max-n', '4', '--k', '2', '--points', '10')
    assert report['outputs']['passed'] is True
    assert report['outputs']['violations_count'] == 0
    assert report['outputs']['violations'] == []


def test_verify_exact_experimental():
    report = _json('verify', 'exact', '--max-n', '3', '--k', '2', '--points', '5',
                   '--experimental')
    assert report['outputs']['passed'] is True
    assert report['outputs']['conjecture']['cells'] == 3 * 5 * 5


def test_verify_mc_self_test_fails():
    code, text = _run('verify', 'mc', '--seed', '3', '--trials', '50000', '--mc-n', '10',
                      '--mc-k', '2', '--eps-points', '1', '--bound-scale', '20')
    assert code == EXIT_VERIFICATION
    report = json.loads(text)
    assert report['seed'] == 3
    assert report['outputs']['passed'] is False


def test_verify_mc_seeded_runs_match():
    argv = ['verify', 'mc', '--seed', '5', '--trials', '2000', '--mc-n', '50', '--mc-k', '5',
            '--eps-points', '3']
    first = _run(*argv)
    second = _run(*(argv + ['--threads', '3']))
    assert first[0] == EXIT_OK
    assert first == second


def test_curve_defaults_to_csv():
    code, text = _run('curve', 'tail', '--n', '10', '--k', '2', '--points', '5')
    assert code == EXIT_OK
    lines = text.strip('\n').split('\n')
    assert lines[0] == 'param,value,primary,relaxed_quadratic,relaxed_minform,types'
    assert len(lines) == 6


@pytest.mark.parametrize('quantity,extra', [
    ('mgf', ['--n', '10', '--k', '3']),
    ('envelope', []),
    ('types', ['--n', '10', '--k', '3']),
])
def test_other_curves(quantity, extra):
    code, text = _run('curve', quantity, '--points', '7', *extra)
    assert code == EXIT_OK
    lines = text.strip('\n').split('\n')
    assert lines[0].startswith('param,value')
    assert len(lines) == 8


@pytest.mark.slow
def test_acceptance_verify_exact():
    code, text = _run('verify', 'exact', '--max-n', '12', '--k', '2,3')
    assert code == EXIT_OK
    assert json.loads(text)['outputs']['violations_count'] == 0
