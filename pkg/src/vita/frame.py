"""Columnar in-memory frame with typed columns and typed per-column metadata.

Frames are immutable values: every operation returns a new frame, sharing
unchanged column objects with its input. Row ids are stable integers assigned
at load and never renumbered; filters elsewhere produce id sets over them, not
new frames.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from .dtypes import DomainType, format_dtype, parse_dtype, value_from_json, value_matches, value_to_json
from .errors import (
    DuplicateColumnError,
    LengthMismatchError,
    TypeMismatchError,
    UnknownColumnError,
)


@dataclass(frozen=True)
class Column:
    """One named, typed column plus its metadata entries.

    Metadata holds derived results without one-to-one row correspondence
    (token inventories, score dictionaries); each entry is itself typed.
    """

    name: str
    dtype: DomainType
    values: tuple
    metadata: Mapping[str, tuple[DomainType, Any]] = field(default_factory=dict)

    def metadata_value(self, key: str) -> Any:
        return self.metadata[key][1]


class VitaFrame:
    """Ordered collection of equal-length columns over stable row ids."""

    __slots__ = ("columns", "row_ids", "provenance_tag", "_by_name")

    def __init__(
        self,
        columns: Sequence[Column] = (),
        row_ids: Sequence[int] | None = None,
        provenance_tag: int | None = None,
    ):
        self.columns: tuple[Column, ...] = tuple(columns)
        if row_ids is None:
            n = len(self.columns[0].values) if self.columns else 0
            row_ids = range(n)
        self.row_ids: tuple[int, ...] = tuple(row_ids)
        self.provenance_tag = provenance_tag
        self._by_name = {c.name: c for c in self.columns}
        if len(self._by_name) != len(self.columns):
            raise DuplicateColumnError("column names must be unique")
        for c in self.columns:
            if len(c.values) != len(self.row_ids):
                raise LengthMismatchError(
                    f"column {c.name!r} has {len(c.values)} values for {len(self.row_ids)} rows"
                )

    # --- introspection ---

    @property
    def num_rows(self) -> int:
        return len(self.row_ids)

    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def has_column(self, name: str) -> bool:
        return name in self._by_name

    def column(self, name: str) -> Column:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownColumnError(f"no column named {name!r}") from None

    def row_index(self, row_id: int) -> int:
        return self.row_ids.index(row_id)

    def cell(self, name: str, row_id: int) -> Any:
        return self.column(name).values[self.row_index(row_id)]

    def columns_of_type(self, dtype: DomainType) -> list[Column]:
        return [c for c in self.columns if c.dtype == dtype]

    # --- operations; each returns a new frame ---

    def _replace(self, columns: Iterable[Column]) -> "VitaFrame":
        return VitaFrame(tuple(columns), self.row_ids, self.provenance_tag)

    def add_column(self, name: str, dtype: DomainType, values: Sequence[Any]) -> "VitaFrame":
        if name in self._by_name:
            raise DuplicateColumnError(f"column {name!r} already exists")
        values = tuple(values)
        if len(values) != self.num_rows:
            raise LengthMismatchError(
                f"{len(values)} values for {self.num_rows} rows in column {name!r}"
            )
        _check_values(name, dtype, values)
        return self._replace(self.columns + (Column(name, dtype, values),))

    def update_column(
        self, name: str, values: Sequence[Any], dtype: DomainType | None = None
    ) -> "VitaFrame":
        """Replace a column's content in place (same position, same row order).

        All metadata of the column is dropped: derived aggregates are stale
        once the content changes.
        """
        old = self.column(name)
        new_dtype = dtype or old.dtype
        values = tuple(values)
        if len(values) != self.num_rows:
            raise LengthMismatchError(
                f"{len(values)} values for {self.num_rows} rows in column {name!r}"
            )
        _check_values(name, new_dtype, values)
        replaced = Column(name, new_dtype, values, {})
        return self._replace(replaced if c.name == name else c for c in self.columns)

    def set_metadata(self, name: str, key: str, dtype: DomainType, value: Any) -> "VitaFrame":
        old = self.column(name)
        if not value_matches(value, dtype):
            raise TypeMismatchError(
                f"metadata {key!r} on {name!r}: value does not match {format_dtype(dtype)}"
            )
        meta = dict(old.metadata)
        meta[key] = (dtype, value)
        replaced = Column(name, old.dtype, old.values, meta)
        return self._replace(replaced if c.name == name else c for c in self.columns)

    def drop_column(self, name: str) -> "VitaFrame":
        self.column(name)
        return self._replace(c for c in self.columns if c.name != name)

    def with_provenance(self, tag: int | None) -> "VitaFrame":
        return VitaFrame(self.columns, self.row_ids, tag)

    # --- canonical serialization; also the basis of content addressing ---

    def to_bundle(self) -> dict:
        return {
            "row_ids": list(self.row_ids),
            "columns": [
                {
                    "name": c.name,
                    "dtype": format_dtype(c.dtype),
                    "values": [value_to_json(v, c.dtype) for v in c.values],
                    "metadata": {
                        k: {"dtype": format_dtype(dt), "value": value_to_json(v, dt)}
                        for k, (dt, v) in sorted(c.metadata.items())
                    },
                }
                for c in self.columns
            ],
        }

    def to_bytes(self) -> bytes:
        return json.dumps(self.to_bundle(), sort_keys=True, separators=(",", ":")).encode()

    @classmethod
    def from_bundle(cls, bundle: dict, provenance_tag: int | None = None) -> "VitaFrame":
        columns = []
        for c in bundle["columns"]:
            dtype = parse_dtype(c["dtype"])
            values = tuple(value_from_json(v, dtype) for v in c["values"])
            meta = {}
            for k, entry in c["metadata"].items():
                mdt = parse_dtype(entry["dtype"])
                meta[k] = (mdt, value_from_json(entry["value"], mdt))
            columns.append(Column(c["name"], dtype, values, meta))
        return cls(tuple(columns), tuple(bundle["row_ids"]), provenance_tag)

    @classmethod
    def from_bytes(cls, data: bytes, provenance_tag: int | None = None) -> "VitaFrame":
        return cls.from_bundle(json.loads(data), provenance_tag)

    def snapshot_hash(self) -> str:
        """Content-addressed digest: equal frames hash equal, across processes."""
        return hashlib.sha256(self.to_bytes()).hexdigest()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VitaFrame) and self.to_bundle() == other.to_bundle()

    def __repr__(self) -> str:
        cols = ", ".join(f"{c.name}:{format_dtype(c.dtype)}" for c in self.columns)
        return f"VitaFrame({self.num_rows} rows; {cols})"


def _check_values(name: str, dtype: DomainType, values: tuple) -> None:
    for i, v in enumerate(values):
        if not value_matches(v, dtype):
            raise TypeMismatchError(
                f"column {name!r} row {i}: value {v!r} does not match {format_dtype(dtype)}"
            )
    if dtype.tag == "Vector":
        lengths = {len(v) for v in values if isinstance(v, tuple)}
        if len(lengths) > 1:
            raise TypeMismatchError(
                f"column {name!r}: vector values must all share one length, got {sorted(lengths)}"
            )


def validate(frame: VitaFrame) -> None:
    """Walk every structural invariant; raises on the first violation.

    Used by tests and by the session before committing a snapshot.
    """
    names = frame.column_names()
    if len(set(names)) != len(names):
        raise DuplicateColumnError("duplicate column names")
    if len(set(frame.row_ids)) != len(frame.row_ids):
        raise LengthMismatchError("row ids must be unique")
    for c in frame.columns:
        if len(c.values) != frame.num_rows:
            raise LengthMismatchError(f"column {c.name!r} length mismatch")
        _check_values(c.name, c.dtype, c.values)
        for key, (dt, v) in c.metadata.items():
            if not value_matches(v, dt):
                raise TypeMismatchError(f"metadata {key!r} on {c.name!r} does not match its type")
