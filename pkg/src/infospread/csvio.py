"""Byte-stable CSV reading and writing.

All output files in this package are written through :func:`write_csv` so
that identical inputs produce byte-identical files: LF line endings, UTF-8,
floats rendered with ``repr`` (shortest round-trip form), missing values as
``NA``.
"""

from __future__ import annotations

import csv
import io
import os
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .curves import EpiCurve

NA = "NA"


def format_cell(value) -> str:
    if value is None:
        return NA
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if value != value:  # NaN doubles as the undefined sentinel
            return NA
        if value in (float("inf"), float("-inf")):
            return repr(value)
        if value == int(value) and abs(value) < 1e15:
            return str(int(value))
        return repr(value)
    return str(value)


def render_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(header))
    for row in rows:
        writer.writerow([format_cell(cell) for cell in row])
    return buf.getvalue()


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    """Write rows atomically (temp file + rename) and return the path."""
    path = Path(path)
    text = render_csv(header, rows)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8", newline="")
    os.replace(tmp, path)
    return path


def curve_to_csv(curve: EpiCurve, path) -> Path:
    return write_csv(path, ["day", "value"], zip(curve.day, curve.value))


def curve_from_csv(path, quantity: str = "cumulative_authors") -> EpiCurve:
    days, values = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "day" not in reader.fieldnames or "value" not in reader.fieldnames:
            raise ValueError(f"{path}: expected CSV with 'day,value' header")
        for record in reader:
            days.append(int(record["day"]))
            values.append(float(record["value"]))
    return EpiCurve(np.array(days), np.array(values), quantity)
