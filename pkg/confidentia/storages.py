# -*- coding: utf-8 -*-
"""Result storages, as the CSV and JSON files."""

import os
import sys
import json
from io import StringIO
import numpy as np
import pandas as pd
from .utilities import to_significant_string
from .exceptions import ConsistencyException

# Setup logging
import logging
logger = logging.getLogger(__name__)

DISPLAY_DIGITS = 6
DISPLAY_SUFFIX = '_display'
NO_DATA_PLACEHOLDERS = ['', 'na', 'nan', 'null']


#======================
#  Base Storage class
#======================

class Storage(object):
    """The base storage class. Stores tables of results (pandas DataFrames, or objects with a ``to_frame()``
    method as the simulation reports), one table per storage."""

    def get(self, *args, **kwargs):
        raise NotImplementedError()

    def put(self, *args, **kwargs):
        raise NotImplementedError()


def _as_frame(table):
    if isinstance(table, pd.DataFrame):
        return table
    try:
        return table.to_frame()
    except AttributeError:
        raise TypeError('Can store only DataFrames or objects with a to_frame() method (got "{}")'.format(table.__class__.__name__))


def _is_float_column(series):
    return pd.api.types.is_float_dtype(series.dtype) or (series.dtype == object and any(isinstance(value, float) for value in series))


class FileStorage(Storage):
    """A file storage. Writes on the standard output if no filename is given.

    Args:
        filename: the file name (including its path), or None for the standard output.
    """

    def __init__(self, filename=None):
        self.filename = filename

    def __repr__(self):
        return '{}(filename={})'.format(self.__class__.__name__, self.filename)

    def _write(self, text, overwrite):
        if self.filename is None:
            sys.stdout.write(text)
            return
        if os.path.isfile(self.filename) and not overwrite:
            raise Exception('File already exists. use overwrite=True to overwrite.')
        with open(self.filename, 'w') as output_file:
            output_file.write(text)
        logger.info('Wrote %s', self.filename)

    def _check_readable(self):
        if self.filename is None:
            raise ConsistencyException('Cannot read from the standard output')


#======================
#  CSV File Storage
#======================

class CSVFileStorage(FileStorage):
    """A CSV file storage. The header row holds the column labels, in the order of the table. Floating point
    values are written with 6 significant digits, missing values as empty fields.

    Args:
        filename: the file name (including its path), or None for the standard output.
        separator: the separator for the fields, ``,`` by default.
        comment_chars: the characters marking full-line comments when reading. Defaulted to ``#``.
    """

    def __init__(self, filename=None, separator=',', comment_chars=['#']):
        super(CSVFileStorage, self).__init__(filename)
        self.separator = separator
        self.comment_chars = comment_chars

    def get(self):
        """Read the table back as a DataFrame."""
        self._check_readable()
        with open(self.filename) as csv_file:
            lines = [line for line in csv_file if not any(line.startswith(char) for char in self.comment_chars)]
        if not lines:
            return pd.DataFrame()
        return pd.read_csv(StringIO(''.join(lines)), sep=self.separator, na_values=NO_DATA_PLACEHOLDERS, keep_default_na=True)

    def put(self, table, overwrite=False):
        frame = _as_frame(table).copy()
        for label in frame.columns:
            if _is_float_column(frame[label]):
                frame[label] = [to_significant_string(value, DISPLAY_DIGITS) if isinstance(value, (float, np.floating)) else value for value in frame[label]]
        self._write(frame.to_csv(sep=self.separator, index=False), overwrite)


#======================
#  JSON File Storage
#======================

def _json_value(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        if np.isnan(value):
            return None
        if np.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


class JSONFileStorage(FileStorage):
    """A JSON file storage. The table is stored as an array of objects, one per row, with numbers in full
    precision. Every floating point column also gets a ``<column>_display`` field with 6 significant digits.

    Args:
        filename: the file name (including its path), or None for the standard output.
    """

    def get(self):
        """Read the table back as a DataFrame (without the display fields)."""
        self._check_readable()
        with open(self.filename) as json_file:
            records = json.load(json_file)
        frame = pd.DataFrame(records)
        return frame[[label for label in frame.columns if not label.endswith(DISPLAY_SUFFIX)]]

    def put(self, table, overwrite=False):
        frame = _as_frame(table)
        float_columns = [label for label in frame.columns if _is_float_column(frame[label])]
        records = []
        for row in frame.to_dict('records'):
            record = {}
            for label in frame.columns:
                record[label] = _json_value(row[label])
                if label in float_columns:
                    value = row[label]
                    record[label + DISPLAY_SUFFIX] = to_significant_string(value, DISPLAY_DIGITS) if isinstance(value, (float, np.floating)) else value
            records.append(record)
        self._write(json.dumps(records, indent=1) + '\n', overwrite)
