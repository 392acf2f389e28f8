"""CSV ingestion: RFC-4180 files become typed frames.

The first row is the header. Column types are inferred from the first 1000
data rows (join of per-cell inference: mixed Int/Float widens to Float, any
other mixture falls back to String). Columns named in ``text_columns`` are
promoted to Text. Empty cells become Null.
"""

from __future__ import annotations

import csv
import io
from typing import Sequence

from .dtypes import DomainType, FLOAT, INT, STRING, TEXT, Null, infer_type, parse_cell
from .errors import LoadError
from .frame import Column, VitaFrame

INFERENCE_ROWS = 1000


def load_csv_text(
    text: str,
    text_columns: Sequence[str] = (),
    delimiter: str = ",",
) -> VitaFrame:
    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    try:
        rows = list(reader)
    except csv.Error as e:
        raise LoadError(str(e), line=reader.line_num) from e
    if not rows:
        raise LoadError("empty input: missing header row", line=1)

    header = rows[0]
    if len(set(header)) != len(header):
        raise LoadError("duplicate column names in header", line=1)
    for name in text_columns:
        if name not in header:
            raise LoadError(f"text column {name!r} not present in header", line=1)

    data = rows[1:]
    for i, row in enumerate(data):
        if len(row) != len(header):
            raise LoadError(
                f"expected {len(header)} fields, found {len(row)}", line=i + 2
            )

    dtypes = [
        TEXT if name in text_columns else _infer_column(data, j)
        for j, name in enumerate(header)
    ]
    columns = []
    for j, (name, dtype) in enumerate(zip(header, dtypes)):
        values = []
        for i, row in enumerate(data):
            try:
                values.append(parse_cell(row[j], dtype))
            except ValueError as e:
                raise LoadError(str(e), line=i + 2) from e
        columns.append(Column(name, dtype, tuple(values)))
    return VitaFrame(tuple(columns), range(len(data)))


def load_csv(
    path: str,
    text_columns: Sequence[str] = (),
    delimiter: str = ",",
) -> VitaFrame:
    with open(path, newline="", encoding="utf-8") as f:
        return load_csv_text(f.read(), text_columns=text_columns, delimiter=delimiter)


def _infer_column(data: list[list[str]], j: int) -> DomainType:
    inferred: set[DomainType] = set()
    for row in data[:INFERENCE_ROWS]:
        cell = row[j]
        if cell == "":
            continue
        inferred.add(infer_type(cell))
        if inferred == {STRING}:
            break
    if not inferred:
        return STRING
    if len(inferred) == 1:
        return next(iter(inferred))
    if inferred <= {INT, FLOAT}:
        return FLOAT
    return STRING


def null_to_empty(value) -> str:
    """Text ops treat a Null cell as the empty string."""
    return "" if value is Null else value
