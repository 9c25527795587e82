"""
Copyright 2026, The quadfeatures authors.
Licensed under the terms of the BSD license. See LICENSE file in project root for terms.
"""

import csv
import io
import json
import logging

import numpy as np

from .exceptions import QuadFeaturesParseError

logger = logging.getLogger(__name__)


def tostr(value):
    """
    Converts a report value to the string written into CSV output; floats
    use their shortest round-tripping representation so that identical
    runs produce byte-identical files.

    :param value: None, a string, an integer or a float
    """

    if value is None:
        return ''
    elif isinstance(value, str):
        return value
    elif isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    elif isinstance(value, (int, np.integer)):
        return str(int(value))
    else:
        return repr(float(value))


def read_json(path):
    """
    Reads a JSON document, turning decoder failures into parse errors that
    carry the offending line number.

    :param path: the file to read
    """
    with open(path) as f:
        text = f.read()
    try:
        return json.loads(text)
    except ValueError as e:
        raise QuadFeaturesParseError(
            '{0}: invalid JSON: {1}'.format(path, e),
            line=getattr(e, 'lineno', None)
        )


def write_json(path, document):
    """Writes a JSON document with a trailing newline (stdout for '-')."""
    write_text(path, json.dumps(document, indent=1) + '\n')


def format_csv(header, rows):
    """
    Renders a header and rows as CSV text using tostr for every cell.

    :param header: a list of column names
    :param rows: an iterable of sequences matching the header
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([tostr(value) for value in row])
    return buffer.getvalue()


def write_text(path, text):
    """Writes text to path, or to stdout when path is '-'."""
    if path == '-':
        print(text, end='')
        return
    with open(path, 'w') as f:
        f.write(text)
    logger.info('wrote %s', path)


def write_csv(path, header, rows):
    """Writes a header and rows as CSV to path (or stdout for '-')."""
    write_text(path, format_csv(header, rows))


def write_matrix_csv(path, matrix):
    """Writes a numeric matrix as headerless CSV, one row per line."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    for row in np.asarray(matrix):
        writer.writerow([tostr(value) for value in row])
    write_text(path, buffer.getvalue())
