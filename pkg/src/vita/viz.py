"""Chart construction and Vega-Lite v5 emission.

Charts carry their data inline (desk scale; no second fetch) plus a source
binding that maps every mark back to frame row ids, which is what makes the
coordination engine able to join selections across views. Bar charts read a
token -> score dictionary (typically an aggregate's metadata) or a category/
value column pair; scatterplots read a 2-dimensional vector column.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping

from .dtypes import is_null
from .errors import MissingBindingError, TypeMismatchError
from .frame import VitaFrame


@dataclass(frozen=True)
class SourceBinding:
    """Where a chart's marks come from and which rows each mark covers."""

    column: str
    metadata_key: str | None
    key_field: str  # the data field identifying a mark: "token" or "row_id"
    mark_to_rows: Mapping[Any, tuple[int, ...]]

    def to_dict(self) -> dict:
        return {
            "column": self.column,
            "metadata_key": self.metadata_key,
            "key_field": self.key_field,
            "mark_to_rows": {str(k): list(v) for k, v in self.mark_to_rows.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SourceBinding":
        key_conv = int if d["key_field"] == "row_id" else str
        return cls(
            d["column"],
            d["metadata_key"],
            d["key_field"],
            {key_conv(k): tuple(v) for k, v in d["mark_to_rows"].items()},
        )


@dataclass(frozen=True)
class VizSpec:
    view_id: str
    mark: str  # bar | point
    data: tuple[dict, ...]
    encodings: Mapping[str, Any]
    transforms: Mapping[str, Any] = field(default_factory=dict)
    signals: tuple[tuple[str, str], ...] = ()  # (param name, selection type)
    source_binding: SourceBinding | None = None

    def to_dict(self) -> dict:
        return {
            "view_id": self.view_id,
            "mark": self.mark,
            "data": list(self.data),
            "encodings": dict(self.encodings),
            "transforms": dict(self.transforms),
            "signals": [list(s) for s in self.signals],
            "source_binding": self.source_binding.to_dict() if self.source_binding else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "VizSpec":
        return cls(
            d["view_id"],
            d["mark"],
            tuple(d["data"]),
            d["encodings"],
            d["transforms"],
            tuple((s[0], s[1]) for s in d["signals"]),
            SourceBinding.from_dict(d["source_binding"]) if d["source_binding"] else None,
        )


def _token_source_column(frame: VitaFrame, column: str) -> str | None:
    """The token column a score dictionary was derived from, when recoverable."""
    col = frame.column(column)
    if "source_column" in col.metadata:
        src = col.metadata_value("source_column")
        if frame.has_column(src) and str(frame.column(src).dtype) == "List(String)":
            return src
    if str(col.dtype) == "List(String)":
        return column
    token_cols = [c.name for c in frame.columns if str(c.dtype) == "List(String)"]
    if len(token_cols) == 1:
        return token_cols[0]
    return None


def _rows_containing(frame: VitaFrame, token_column: str, tokens: list[str]) -> dict[str, tuple[int, ...]]:
    col = frame.column(token_column)
    wanted = set(tokens)
    found: dict[str, list[int]] = {t: [] for t in tokens}
    for row_id, row in zip(frame.row_ids, col.values):
        if is_null(row):
            continue
        for t in set(row) & wanted:
            found[t].append(row_id)
    return {t: tuple(ids) for t, ids in found.items()}


def visualize_bar(
    frame: VitaFrame,
    view_id: str,
    column: str,
    key: str | None = None,
    category: str | None = None,
    value: str | None = None,
    top_k: int = 15,
) -> VizSpec:
    if key is not None:
        dt, scores = frame.column(column).metadata[key]
        if str(dt) != "Dictionary(String,Float)":
            raise TypeMismatchError(f"bar metadata {key!r} must be Dictionary(String,Float)")
        items = list(scores.items())
    elif category is not None and value is not None:
        cats = frame.column(category).values
        vals = frame.column(value).values
        totals: dict[str, float] = {}
        for c, v in zip(cats, vals):
            if is_null(c) or is_null(v):
                continue
            totals[str(c)] = totals.get(str(c), 0.0) + float(v)
        items = list(totals.items())
    else:
        raise MissingBindingError("bar requires a score dictionary or category/value columns")
    if not items:
        raise MissingBindingError("bar has no categories to draw")

    items.sort(key=lambda kv: (-kv[1], kv[0]))
    items = items[: max(0, top_k)]
    data = tuple({"token": t, "score": float(v)} for t, v in items)

    if key is not None:
        token_col = _token_source_column(frame, column)
        mark_to_rows = (
            _rows_containing(frame, token_col, [t for t, _ in items]) if token_col else {}
        )
    else:
        by_cat: dict[str, list[int]] = {t: [] for t, _ in items}
        for row_id, c in zip(frame.row_ids, frame.column(category).values):
            if not is_null(c) and str(c) in by_cat:
                by_cat[str(c)].append(row_id)
        mark_to_rows = {t: tuple(ids) for t, ids in by_cat.items()}

    sel = f"sel_{view_id}"
    return VizSpec(
        view_id=view_id,
        mark="bar",
        data=data,
        encodings={
            "x": {"field": "token", "type": "nominal", "sort": "-y"},
            "y": {"field": "score", "type": "quantitative"},
            "tooltip": [
                {"field": "token", "type": "nominal"},
                {"field": "score", "type": "quantitative"},
            ],
        },
        transforms={"sort": "-score", "top_k": top_k},
        signals=((sel, "point"),),
        source_binding=SourceBinding(column, key, "token", mark_to_rows),
    )


def visualize_scatter(
    frame: VitaFrame, view_id: str, column: str, color: str | None = None
) -> VizSpec:
    col = frame.column(column)
    if col.dtype.tag != "Vector":
        raise TypeMismatchError(f"scatter expects a Vector column, found {col.dtype}")
    dims = {len(v) for v in col.values if not is_null(v)}
    if dims and dims != {2}:
        raise TypeMismatchError(f"scatter needs 2-dimensional vectors, found dimension {dims}")

    color_values = frame.column(color).values if color else None
    records = []
    mark_to_rows: dict[int, tuple[int, ...]] = {}
    for i, (row_id, vec) in enumerate(zip(frame.row_ids, col.values)):
        if is_null(vec):
            continue
        rec = {"row_id": row_id, "x": float(vec[0]), "y": float(vec[1])}
        if color_values is not None and not is_null(color_values[i]):
            rec["cluster"] = int(color_values[i])
        records.append(rec)
        mark_to_rows[row_id] = (row_id,)

    encodings: dict[str, Any] = {
        "x": {"field": "x", "type": "quantitative"},
        "y": {"field": "y", "type": "quantitative"},
        "tooltip": [{"field": "row_id", "type": "quantitative"}],
    }
    if color:
        encodings["color"] = {"field": "cluster", "type": "nominal"}
    sel = f"sel_{view_id}"
    return VizSpec(
        view_id=view_id,
        mark="point",
        data=tuple(records),
        encodings=encodings,
        transforms={},
        signals=((sel, "interval"),),
        source_binding=SourceBinding(column, None, "row_id", mark_to_rows),
    )


def to_vegalite(spec: VizSpec) -> bytes:
    """Emit one canonical Vega-Lite v5 document; equal specs emit equal bytes."""
    encoding = dict(spec.encodings)
    params = []
    for name, select_type in spec.signals:
        select: dict[str, Any] = {"type": select_type}
        if select_type == "point" and spec.mark == "bar":
            select["encodings"] = ["x"]
        elif select_type == "interval":
            select["encodings"] = ["x", "y"]
        params.append({"name": name, "select": select})
        encoding["opacity"] = {
            "condition": {"param": name, "value": 1.0},
            "value": 0.4,
        }
    doc = {
        "$schema": "https://vega.github.io/schema/vega-lite/v5.json",
        "name": spec.view_id,
        "data": {"values": list(spec.data)},
        "mark": spec.mark,
        "encoding": encoding,
    }
    if params:
        doc["params"] = params
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
