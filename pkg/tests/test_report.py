import json
import math

import numpy as np
import pandas as pd

from relentropy.bounds import TailBoundReport
from relentropy.config import config
from relentropy.report import RunReport, encode, flatten, format_float, write_table


def test_field_order_and_version():
    report = RunReport(command='bound tail', inputs={'n': 10}, outputs={'value': 0.5}, seed=7)
    text = report.to_json()
    assert list(json.loads(text).keys()) == ['command', 'version', 'seed', 'inputs', 'outputs']
    assert json.loads(text)['version'] == config.VERSION
    assert json.loads(text)['seed'] == 7


def test_floats_round_trip():
    for value in (0.1, 1.0 / 3.0, 0.5723564, 1e-300, 2.0 ** -1074, 123456789.123456789):
        assert float(format_float(value)) == value
        assert json.loads(encode({'x': value}))['x'] == value


def test_non_finite_tokens():
    decoded = json.loads(encode([math.inf, -math.inf, math.nan]))
    assert decoded == ['inf', '-inf', 'nan']


def test_numpy_and_dataclass_values():
    report = TailBoundReport(primary=0.25, relaxed_quadratic=0.5, relaxed_minform=0.75,
                             side='upper', value=0.25)
    decoded = json.loads(encode({'a': np.float64(0.5), 'b': np.int64(3), 'c': np.bool_(True),
                                 'd': np.array([1.0, 2.0]), 'e': report, 'f': None}))
    assert decoded == {'a': 0.5, 'b': 3, 'c': True, 'd': [1.0, 2.0], 'f': None,
                       'e': {'primary': 0.25, 'relaxed_quadratic': 0.5,
                             'relaxed_minform': 0.75, 'side': 'upper', 'value': 0.25}}


def test_strings_are_escaped():
    assert json.loads(encode('a "quoted"\nline')) == 'a "quoted"\nline'


def test_flatten():
    flat = flatten({'a': {'b': 1, 'c': (2, 3)}, 'd': 4.0, 'skip': pd.DataFrame()})
    assert flat == {'a.b': 1, 'a.c.0': 2, 'a.c.1': 3, 'd': 4.0}


def test_csv_dialect():
    frame = pd.DataFrame({'param': [0.1, 0.2], 'value': [1.0 / 3.0, math.inf], 'ok': [True, False]})
    text = write_table(frame)
    assert '\r' not in text
    lines = text.strip('\n').split('\n')
    assert lines[0] == 'param,value,ok'
    assert lines[1].split(',')[2] == '1'
    assert float(lines[1].split(',')[1]) == 1.0 / 3.0
    assert lines[2].split(',')[1] == 'inf'


def test_csv_and_json_carry_the_same_values():
    report = RunReport(command='bound mean', outputs={'log_form': math.log(1.1), 'linear_form': 0.1})
    row = report.to_csv().strip('\n').split('\n')
    header, values = row[0].split(','), [float(v) for v in row[1].split(',')]
    decoded = json.loads(report.to_json())['outputs']
    assert dict(zip(header, values)) == decoded


def test_table_outputs_write_the_table():
    table = pd.DataFrame({'param': [0.0, 1.0], 'value': [1.0, 0.5]})
    report = RunReport(command='curve tail', outputs={'table': table})
    assert report.to_csv() == 'param,value\n0,1\n1,0.5\n'
    assert json.loads(report.to_json())['outputs']['table'] == [
        {'param': 0.0, 'value': 1.0}, {'param': 1.0, 'value': 0.5}]
