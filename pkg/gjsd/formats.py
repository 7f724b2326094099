"""
gjsd.formats
============

This module contains functions to print command reports in different formats.

Reports are dictionaries of JSON-compatible values. Verification reports carry a ``cases`` list
and table reports a ``rows`` list, which the text format renders as aligned tables.

Attributes:
    FORMAT_DICT (dict): Dictionary which maps format identifiers to their functions
    FORMAT_DEFAULT (str): Default output format
"""

import json
import sys

_TABLE_KEYS = ('cases', 'rows')


def print_json_format(report: dict, stream=None):
    """Prints the report as canonical JSON, keys sorted

    Args:
        report: Command report
        stream (optional): Output stream, stdout when omitted
    """
    stream = stream or sys.stdout
    stream.write(json.dumps(report, sort_keys=True, indent=2))
    stream.write('\n')


def _cell(value) -> str:
    if isinstance(value, bool):
        return 'yes' if value else 'NO'
    if isinstance(value, float):
        return '%.10g' % value
    if isinstance(value, (list, tuple)):
        return '[%s]' % ', '.join(_cell(item) for item in value)
    return str(value)


def _print_table(rows: list, stream):
    columns = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    cells = [[_cell(row.get(key, '')) for key in columns] for row in rows]
    widths = [max([len(key)] + [len(line[index]) for line in cells]) for index, key in enumerate(columns)]
    stream.write('  '.join(key.ljust(width) for key, width in zip(columns, widths)).rstrip() + '\n')
    stream.write('  '.join('-' * width for width in widths) + '\n')
    for line in cells:
        stream.write('  '.join(cell.ljust(width) for cell, width in zip(line, widths)).rstrip() + '\n')


def print_text_format(report: dict, stream=None):
    """Prints the report as ``key : value`` lines followed by its tables

    Args:
        report: Command report
        stream (optional): Output stream, stdout when omitted
    """
    stream = stream or sys.stdout
    scalars = [key for key in sorted(report) if key not in _TABLE_KEYS]
    width = max([len(key) for key in scalars] + [1])
    for key in scalars:
        stream.write('%s : %s\n' % (key.ljust(width), _cell(report[key])))
    for key in _TABLE_KEYS:
        if report.get(key):
            stream.write('\n')
            _print_table(report[key], stream)


FORMAT_DICT = {
    'json': print_json_format,
    'text': print_text_format,
}

FORMAT_DEFAULT = 'json'


__author__ = 'GeneralizedJSD developers'
