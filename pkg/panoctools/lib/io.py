#!/usr/bin/env python3

#
# Copyright (C) 2026 The panoctools developers
#
# This file is part of panoctools, an augmented Lagrangian solver for
# nonconvex constrained optimization built around PANOC.
#
# panoctools is free software: you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation, either version 3 of the License, or (at
# your option) any later version.
#
# panoctools is distributed in the hope that it will be useful, but
# WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the GNU
# General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with panoctools.  If not, see <http://www.gnu.org/licenses/>.
#

import json
import math

from errno import EPIPE


def try_write_pipe(stream, *args):
    """Call stream.write(*args), ignore EPIPE errors."""
    try:
        stream.write(*args)
    except IOError as e:
        if e.errno == EPIPE:
            return
        raise
#try_write_pipe


def format_value(value):
    """Format a table cell: None becomes empty, floats use repr precision."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else str(value)
    return str(value)
#format_value


def write_table_header(outfile, columns, sep=","):
    try_write_pipe(outfile, sep.join(columns) + "\n")
#write_table_header


def write_table_row(outfile, columns, row, sep=","):
    """Write the values of row (a dict) in the order of columns."""
    try_write_pipe(outfile, sep.join(format_value(row.get(column)) for column in columns) + "\n")
#write_table_row


def _json_default(value):
    if hasattr(value, "tolist"):
        return value.tolist()
    if hasattr(value, "as_dict"):
        return value.as_dict()
    return str(value)
#_json_default


def write_json(outfile, data):
    """Write data as an indented JSON object, followed by a newline."""
    try_write_pipe(outfile, json.dumps(data, indent=2, default=_json_default) + "\n")
#write_json
