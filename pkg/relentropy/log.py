"""Logger factory with a stderr formatter that honours NO_COLOR."""

import logging
import sys

from relentropy.config import config

_COLORS = {
    'DEBUG': '\033[36m',
    'INFO': '\033[32m',
    'WARNING': '\033[33m',
    'ERROR': '\033[31m',
    'CRITICAL': '\033[1;31m',
}
_RESET = '\033[0m'


class DiagnosticFormatter(logging.Formatter):
    """Formats `level name: message`, colouring the level when allowed."""

    def __init__(self, color):
        super(DiagnosticFormatter, self).__init__('%(levelname)s %(name)s: %(message)s')
        self.color = color

    def format(self, record):
        text = super(DiagnosticFormatter, self).format(record)
        if self.color and record.levelname in _COLORS:
            text = _COLORS[record.levelname] + text[:len(record.levelname)] + _RESET + \
                text[len(record.levelname):]
        return text


def get_logger(name):
    """Return the package logger for a module.

    Args:
        name: Module __name__

    Returns:
        logging.Logger
    """
    return logging.getLogger(name)


def configure(verbosity=0, stream=None):
    """Install a single stderr handler on the package logger.

    Args:
        verbosity: -1 quiet (WARNING), 0 INFO, 1+ DEBUG
        stream: Target stream, stderr by default
    """
    stream = stream or sys.stderr
    color = not config.NO_COLOR and hasattr(stream, 'isatty') and stream.isatty()

    handler = logging.StreamHandler(stream)
    handler.setFormatter(DiagnosticFormatter(color))

    root = logging.getLogger('relentropy')
    for old in list(root.handlers):
        root.removeHandler(old)
    root.addHandler(handler)
    root.propagate = False

    if verbosity < 0:
        root.setLevel(logging.WARNING)
    elif verbosity == 0:
        root.setLevel(logging.INFO)
    else:
        root.setLevel(logging.DEBUG)
    return root
