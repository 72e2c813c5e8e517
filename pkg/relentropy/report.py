"""RunReport and its JSON / CSV serialization.

JSON layout (field order fixed):

    {"command": str, "version": str, "seed": int|null,
     "inputs": {...}, "outputs": {...}}

Floats carry 17 significant digits so every printed number parses back to
the same double; non-finite floats become the strings "inf", "-inf" and
"nan". DataFrames inside outputs serialize as lists of row objects.

CSV: comma separated, header row, LF line endings, no quoting. A report
whose outputs hold a `table` DataFrame writes that table; otherwise its
scalar outputs form a single row with dotted column names.
"""

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from relentropy.config import config


@dataclass
class RunReport(object):
    command: str
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    version: str = config.VERSION
    seed: int = None

    def to_json(self):
        ordered = [
            ('command', self.command),
            ('version', self.version),
            ('seed', self.seed),
            ('inputs', self.inputs),
            ('outputs', self.outputs),
        ]
        return '{' + ', '.join('{}: {}'.format(_string(k), encode(v)) for k, v in ordered) + '}'

    def to_frame(self):
        table = self.outputs.get('table')
        if isinstance(table, pd.DataFrame):
            return table
        return pd.DataFrame([flatten(self.outputs)])

    def to_csv(self):
        return write_table(self.to_frame())


def _string(text):
    return json.dumps(str(text))


def format_float(value):
    """17 significant digits, or a string token for non-finite values."""
    value = float(value)
    if math.isnan(value):
        return '"nan"'
    if math.isinf(value):
        return '"inf"' if value > 0 else '"-inf"'
    return format(value, '.17g')


def encode(value):
    """Serialize a value to JSON text with the report's float convention."""
    if value is None:
        return 'null'
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    if isinstance(value, str):
        return _string(value)
    if isinstance(value, pd.DataFrame):
        return encode(value.to_dict(orient='records'))
    if isinstance(value, dict):
        return '{' + ', '.join('{}: {}'.format(_string(k), encode(v)) for k, v in value.items()) + '}'
    if isinstance(value, (list, tuple, np.ndarray)):
        return '[' + ', '.join(encode(v) for v in value) + ']'
    if hasattr(value, '__dataclass_fields__'):
        return encode({name: getattr(value, name) for name in value.__dataclass_fields__})
    raise TypeError('cannot serialize {!r}'.format(type(value)))


def flatten(mapping, prefix=''):
    """Flatten nested dicts (and dataclasses) to dotted scalar keys."""
    flat = {}
    for key, value in mapping.items():
        name = '{}.{}'.format(prefix, key) if prefix else str(key)
        if hasattr(value, '__dataclass_fields__'):
            value = {f: getattr(value, f) for f in value.__dataclass_fields__}
        if isinstance(value, dict):
            flat.update(flatten(value, name))
        elif isinstance(value, (list, tuple)):
            for i, item in enumerate(value):
                flat['{}.{}'.format(name, i)] = item
        elif isinstance(value, pd.DataFrame):
            continue
        else:
            flat[name] = value
    return flat


def write_table(df):
    """Render a DataFrame as the report CSV dialect.

    Booleans become 0/1 so the payload stays numeric.
    """
    out = df.copy()
    for column in out.columns:
        if out[column].dtype == bool:
            out[column] = out[column].astype(int)
    buffer = io.StringIO()
    out.to_csv(buffer, index=False, lineterminator='\n', float_format='%.17g')
    return buffer.getvalue()
