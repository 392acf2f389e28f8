"""Domain types and typed values for the vitaframe data model.

The type system has eight primitive tags (String, Int, Float, Bool, DateTime,
List, Vector, Dictionary) and two synthesized tags (Text, Visualization).
Text behaves as String plus tokenization affordances; promotion to Text is
always explicit (loader flag or operator), never inferred. A distinguished
``Null`` value is legal in any column.

Values are plain Python objects: ``str``, ``int``, ``float``, ``bool``,
``datetime``, ``tuple`` (List and Vector), ``dict`` (Dictionary, insertion
ordered) and viz-spec objects for Visualization cells.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime
from typing import Any

PRIMITIVE_TAGS = frozenset(
    {"String", "Int", "Float", "Bool", "DateTime", "List", "Vector", "Dictionary"}
)
SYNTHESIZED_TAGS = frozenset({"Text", "Visualization"})
ALL_TAGS = PRIMITIVE_TAGS | SYNTHESIZED_TAGS

_NUMERIC_TAGS = frozenset({"Int", "Float"})


@dataclass(frozen=True)
class DomainType:
    """A fully-resolved data domain tag, possibly parameterized.

    ``inner`` is set for List and Vector; ``key``/``value`` for Dictionary.
    Instances are immutable and compare structurally.
    """

    tag: str
    inner: "DomainType | None" = None
    key: "DomainType | None" = None
    value: "DomainType | None" = None

    def __post_init__(self):
        if self.tag not in ALL_TAGS:
            raise ValueError(f"unknown domain tag {self.tag!r}")
        if self.tag in ("List", "Vector"):
            if self.inner is None:
                raise ValueError(f"{self.tag} requires an inner type")
            if self.tag == "Vector" and self.inner.tag not in _NUMERIC_TAGS:
                raise ValueError("Vector inner type must be numeric")
        elif self.tag == "Dictionary":
            if self.key is None or self.value is None:
                raise ValueError("Dictionary requires key and value types")
        else:
            if self.inner is not None or self.key is not None or self.value is not None:
                raise ValueError(f"{self.tag} takes no type parameters")

    @property
    def is_primitive(self) -> bool:
        return self.tag in PRIMITIVE_TAGS

    @property
    def is_numeric(self) -> bool:
        return self.tag in _NUMERIC_TAGS

    @property
    def is_textual(self) -> bool:
        return self.tag in ("String", "Text")

    def __str__(self) -> str:
        return format_dtype(self)


STRING = DomainType("String")
INT = DomainType("Int")
FLOAT = DomainType("Float")
BOOL = DomainType("Bool")
DATETIME = DomainType("DateTime")
TEXT = DomainType("Text")
VISUALIZATION = DomainType("Visualization")


def list_of(inner: DomainType) -> DomainType:
    return DomainType("List", inner=inner)


def vector_of(inner: DomainType = FLOAT) -> DomainType:
    return DomainType("Vector", inner=inner)


def dict_of(key: DomainType, value: DomainType) -> DomainType:
    return DomainType("Dictionary", key=key, value=value)


TOKENS = list_of(STRING)
FLOAT_VECTOR = vector_of(FLOAT)
SCORE_DICT = dict_of(STRING, FLOAT)


def format_dtype(dt: DomainType) -> str:
    """Render a type as its canonical text form, e.g. ``Dictionary(String,Float)``."""
    if dt.tag in ("List", "Vector"):
        return f"{dt.tag}({format_dtype(dt.inner)})"
    if dt.tag == "Dictionary":
        return f"Dictionary({format_dtype(dt.key)},{format_dtype(dt.value)})"
    return dt.tag


def parse_dtype(text: str) -> DomainType:
    """Inverse of :func:`format_dtype`."""
    text = text.strip()
    m = re.fullmatch(r"(List|Vector)\((.*)\)", text)
    if m:
        return DomainType(m.group(1), inner=parse_dtype(m.group(2)))
    m = re.fullmatch(r"Dictionary\((.*)\)", text)
    if m:
        depth, split = 0, -1
        args = m.group(1)
        for i, ch in enumerate(args):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "," and depth == 0:
                split = i
                break
        if split < 0:
            raise ValueError(f"malformed Dictionary type {text!r}")
        return dict_of(parse_dtype(args[:split]), parse_dtype(args[split + 1:]))
    if text in ALL_TAGS:
        return DomainType(text)
    raise ValueError(f"unknown domain type {text!r}")


class _Null:
    """Singleton marker for a missing cell; legal in any column."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Null"

    def __bool__(self) -> bool:
        return False


Null = _Null()


def is_null(v: Any) -> bool:
    return v is Null


_INT_RE = re.compile(r"[+-]?\d+")
_FLOAT_RE = re.compile(r"[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?")
_DATE_PREFIX_RE = re.compile(r"\d{4}-\d{2}-\d{2}([T ].+)?")


def infer_type(raw: str) -> DomainType:
    """Infer the most specific primitive type of one raw string.

    Precedence is Bool > Int > Float > DateTime > String; String is the
    universal fallback, so this never raises. Text is never inferred.
    """
    s = raw.strip()
    if s.lower() in ("true", "false"):
        return BOOL
    if _INT_RE.fullmatch(s):
        return INT
    if _FLOAT_RE.fullmatch(s):
        return FLOAT
    if _DATE_PREFIX_RE.fullmatch(s):
        try:
            datetime.fromisoformat(s)
            return DATETIME
        except ValueError:
            pass
    return STRING


def parse_cell(raw: str, dtype: DomainType) -> Any:
    """Convert one CSV cell to a typed value. Empty cells become Null."""
    if raw == "":
        return Null
    s = raw.strip()
    tag = dtype.tag
    if tag == "Bool":
        if s.lower() == "true":
            return True
        if s.lower() == "false":
            return False
    elif tag == "Int":
        if _INT_RE.fullmatch(s):
            return int(s)
    elif tag == "Float":
        if _FLOAT_RE.fullmatch(s) or _INT_RE.fullmatch(s):
            return float(s)
    elif tag == "DateTime":
        try:
            return datetime.fromisoformat(s)
        except ValueError:
            pass
    elif tag in ("String", "Text"):
        return raw
    raise ValueError(f"cell {raw!r} does not parse as {format_dtype(dtype)}")


def value_matches(value: Any, dtype: DomainType) -> bool:
    """Check that a runtime value inhabits a domain type. Null matches anything."""
    if value is Null:
        return True
    tag = dtype.tag
    if tag in ("String", "Text"):
        return isinstance(value, str)
    if tag == "Int":
        return isinstance(value, int) and not isinstance(value, bool)
    if tag == "Float":
        return isinstance(value, float)
    if tag == "Bool":
        return isinstance(value, bool)
    if tag == "DateTime":
        return isinstance(value, datetime)
    if tag == "List":
        return isinstance(value, tuple) and all(value_matches(v, dtype.inner) for v in value)
    if tag == "Vector":
        return isinstance(value, tuple) and all(
            v is not Null and value_matches(v, dtype.inner) for v in value
        )
    if tag == "Dictionary":
        return isinstance(value, dict) and all(
            value_matches(k, dtype.key) and value_matches(v, dtype.value)
            for k, v in value.items()
        )
    if tag == "Visualization":
        return hasattr(value, "view_id") and hasattr(value, "mark")
    return False


def value_to_json(value: Any, dtype: DomainType) -> Any:
    """Lower a typed value to a JSON-compatible form (canonical, reversible)."""
    if value is Null:
        return None
    tag = dtype.tag
    if tag == "DateTime":
        return value.isoformat()
    if tag in ("List", "Vector"):
        return [value_to_json(v, dtype.inner) for v in value]
    if tag == "Dictionary":
        return {str(k): value_to_json(v, dtype.value) for k, v in value.items()}
    if tag == "Visualization":
        return value.to_dict()
    return value


def value_from_json(data: Any, dtype: DomainType) -> Any:
    """Inverse of :func:`value_to_json`."""
    if data is None:
        return Null
    tag = dtype.tag
    if tag == "DateTime":
        return datetime.fromisoformat(data)
    if tag in ("List", "Vector"):
        return tuple(value_from_json(v, dtype.inner) for v in data)
    if tag == "Dictionary":
        key_conv = int if dtype.key.tag == "Int" else str
        return {key_conv(k): value_from_json(v, dtype.value) for k, v in data.items()}
    if tag == "Visualization":
        from .viz import VizSpec

        return VizSpec.from_dict(data)
    if tag == "Float" and isinstance(data, int):
        return float(data)
    return data
