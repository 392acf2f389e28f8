"""Row predicate evaluation: the engine half of list selections.

Returns exact row-id sets. Null cells never satisfy a predicate. ``contains``
on textual columns matches token-boundary occurrences after lowercasing;
on token-list columns it is plain membership.
"""

from __future__ import annotations

from datetime import datetime
from typing import Any

from ..dtypes import is_null
from ..errors import PredicateError, UnknownFieldError
from ..frame import VitaFrame
from .text import tokenize_text

_ORDER_OPS = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


def _comparable(cell: Any, literal: Any, op: str) -> bool:
    if isinstance(cell, bool) or isinstance(literal, bool):
        return isinstance(cell, bool) and isinstance(literal, bool) and op in ("==", "!=")
    if isinstance(cell, (int, float)) and isinstance(literal, (int, float)):
        return True
    if isinstance(cell, str) and isinstance(literal, str):
        return True
    if isinstance(cell, datetime) and isinstance(literal, datetime):
        return True
    return False


def _field_values(frame: VitaFrame, field: str):
    if field == "row_id":
        return "row_id", list(frame.row_ids)
    if not frame.has_column(field):
        raise UnknownFieldError(f"no field named {field!r}")
    return frame.column(field).dtype.tag, list(frame.column(field).values)


def filter_rows(frame: VitaFrame, field: str, op: str, value: Any) -> set[int]:
    tag, cells = _field_values(frame, field)
    matched: set[int] = set()
    for row_id, cell in zip(frame.row_ids, cells):
        if is_null(cell):
            continue
        if _matches(cell, tag, op, value):
            matched.add(row_id)
    return matched


def interval_rows(frame: VitaFrame, field: str, low: Any, high: Any) -> set[int]:
    tag, cells = _field_values(frame, field)
    matched: set[int] = set()
    for row_id, cell in zip(frame.row_ids, cells):
        if is_null(cell):
            continue
        if not (_comparable(cell, low, "<=") and _comparable(cell, high, "<=")):
            raise PredicateError(f"interval on {field!r}: bounds do not match cell type")
        if low <= cell <= high:
            matched.add(row_id)
    return matched


def _matches(cell: Any, tag: str, op: str, value: Any) -> bool:
    if op == "contains":
        if tag in ("Text", "String"):
            if not isinstance(value, str):
                raise PredicateError("contains on text expects a string literal")
            return str(value).lower() in tokenize_text(cell.lower())
        if tag == "List":
            return value in cell
        raise PredicateError(f"contains is not defined for {tag} fields")
    if op == "in":
        if not isinstance(value, tuple):
            raise PredicateError("'in' expects a list of literals")
        return any(_matches(cell, tag, "==", v) for v in value)
    if op in ("==", "!="):
        if not _comparable(cell, value, op):
            raise PredicateError(f"cannot compare {tag} field with {type(value).__name__}")
        return (cell == value) if op == "==" else (cell != value)
    if op in _ORDER_OPS:
        if not _comparable(cell, value, op):
            raise PredicateError(f"cannot order {tag} field against {type(value).__name__}")
        return _ORDER_OPS[op](cell, value)
    raise PredicateError(f"unknown predicate op {op!r}")
