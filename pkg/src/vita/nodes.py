"""Parsed operator nodes: the uniform tree both input surfaces produce.

Operators arrive either as JSON specs or as declarative commands; both parse
into :class:`OperatorNode`. The JSON field set is::

    {"operator": str, "action"?: "add"|"create"|"update",
     "column"?: str, "view"?: str, "udf"?: str, "name"?: str,
     "params"?: {str: literal | [literal...]},
     "ops"?: [spec...],
     "selection"?: {"type": "single"|"multi", "kind": "single"|"list"|"interval",
                    "field": str, "op": str, "value": any}}

Unknown fields are rejected; kind and action strings match case-sensitively.
A node whose operator is not a built-in kind refers to a registered composite
operator and is resolved at compile time. Parsed nodes may omit the action
("none"); the compiler fills per-kind defaults before execution.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any, Mapping

from .errors import OperatorSchemaError, OperatorSyntaxError

KINDS = (
    "select",
    "project",
    "mutate",
    "aggregate",
    "set",
    "visualize",
    "combine",
    "synthesize",
    "coordinate",
    "load",
    "undo",
    "checkout",
    "clear",
)
TRANSFORM_KINDS = ("project", "mutate", "aggregate", "set", "visualize")
ACTIONS = ("add", "create", "update", "none")
SELECTION_KINDS = ("single", "list", "interval")
MAPPING_TAGS = ("single", "multi")
PREDICATE_OPS = ("==", "!=", "<", "<=", ">", ">=", "contains", "in")

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class Predicate:
    """Field comparison: intervals use op ``in`` with an ordered (low, high) pair."""

    field: str
    op: str
    value: Any


@dataclass(frozen=True)
class SelectionSpec:
    view: str
    kind: str
    predicate: Predicate
    mapping_tag: str = "single"


@dataclass(frozen=True)
class OperatorNode:
    kind: str
    action: str = "none"
    column: str | None = None
    view: str | None = None
    udf: str | None = None
    name: str | None = None
    params: Mapping[str, Any] = field(default_factory=dict)
    children: tuple["OperatorNode", ...] = ()
    selection: SelectionSpec | None = None

    @property
    def is_builtin_kind(self) -> bool:
        return self.kind in KINDS


def parse_json(data: bytes | str) -> OperatorNode:
    """Parse one JSON operator spec into a validated node."""
    if isinstance(data, bytes):
        data = data.decode("utf-8", errors="replace")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as e:
        raise OperatorSyntaxError(e.msg, e.pos) from e
    return node_from_dict(obj, "$")


def serialize(node: OperatorNode) -> bytes:
    """Canonical JSON: sorted keys, no insignificant whitespace.

    ``parse_json(serialize(n)) == n`` for every valid node, and structurally
    equal nodes serialize byte-identically.
    """
    return json.dumps(node_to_dict(node), sort_keys=True, separators=(",", ":")).encode()


def node_to_dict(node: OperatorNode) -> dict:
    out: dict[str, Any] = {"operator": node.kind}
    if node.action != "none":
        out["action"] = node.action
    if node.column is not None:
        out["column"] = node.column
    if node.view is not None:
        out["view"] = node.view
    if node.udf is not None:
        out["udf"] = node.udf
    if node.name is not None:
        out["name"] = node.name
    if node.params:
        out["params"] = {k: _literal_to_json(v) for k, v in sorted(node.params.items())}
    if node.children:
        out["ops"] = [node_to_dict(c) for c in node.children]
    if node.selection is not None:
        s = node.selection
        out["selection"] = {
            "type": s.mapping_tag,
            "kind": s.kind,
            "field": s.predicate.field,
            "op": s.predicate.op,
            "value": _literal_to_json(s.predicate.value),
        }
    return out


def _literal_to_json(v: Any) -> Any:
    return list(v) if isinstance(v, tuple) else v


def _literal_from_json(v: Any, path: str) -> Any:
    if isinstance(v, list):
        return tuple(_literal_from_json(x, path) for x in v)
    if v is None or isinstance(v, (str, int, float, bool)):
        return v
    raise OperatorSchemaError(path, f"unsupported literal {v!r}")


_KNOWN_FIELDS = {
    "operator",
    "action",
    "column",
    "view",
    "udf",
    "name",
    "params",
    "ops",
    "selection",
}
_SELECTION_FIELDS = {"type", "kind", "field", "op", "value"}


def node_from_dict(obj: Any, path: str = "$") -> OperatorNode:
    if not isinstance(obj, dict):
        raise OperatorSchemaError(path, f"expected an object, found {type(obj).__name__}")
    unknown = set(obj) - _KNOWN_FIELDS
    if unknown:
        raise OperatorSchemaError(path, f"unknown fields: {', '.join(sorted(unknown))}")

    kind = obj.get("operator")
    if not isinstance(kind, str):
        raise OperatorSchemaError(f"{path}.operator", "required string field")
    if kind not in KINDS and not _IDENT_RE.fullmatch(kind):
        raise OperatorSchemaError(f"{path}.operator", f"not an operator name: {kind!r}")

    action = obj.get("action", "none")
    if action not in ACTIONS:
        raise OperatorSchemaError(f"{path}.action", f"not an action: {action!r}")

    for fname in ("column", "view", "udf", "name"):
        v = obj.get(fname)
        if v is not None and not isinstance(v, str):
            raise OperatorSchemaError(f"{path}.{fname}", "must be a string")

    params_obj = obj.get("params", {})
    if not isinstance(params_obj, dict):
        raise OperatorSchemaError(f"{path}.params", "must be an object")
    params = {
        k: _literal_from_json(v, f"{path}.params.{k}") for k, v in params_obj.items()
    }

    children_obj = obj.get("ops", [])
    if not isinstance(children_obj, list):
        raise OperatorSchemaError(f"{path}.ops", "must be an array")
    children = tuple(
        node_from_dict(c, f"{path}.ops[{i}]") for i, c in enumerate(children_obj)
    )

    selection = None
    if "selection" in obj:
        view = obj.get("view")
        selection = _selection_from_dict(
            obj["selection"], f"{path}.selection", view if isinstance(view, str) else ""
        )

    node = OperatorNode(
        kind=kind,
        action=action,
        column=obj.get("column"),
        view=obj.get("view"),
        udf=obj.get("udf"),
        name=obj.get("name"),
        params=params,
        children=children,
        selection=selection,
    )
    validate_node(node, path)
    return node


def _selection_from_dict(obj: Any, path: str, view: str = "") -> SelectionSpec:
    if not isinstance(obj, dict):
        raise OperatorSchemaError(path, "must be an object")
    unknown = set(obj) - _SELECTION_FIELDS
    if unknown:
        raise OperatorSchemaError(path, f"unknown fields: {', '.join(sorted(unknown))}")
    for req in ("kind", "field", "op"):
        if req not in obj:
            raise OperatorSchemaError(f"{path}.{req}", "required field")
    kind = obj["kind"]
    if kind not in SELECTION_KINDS:
        raise OperatorSchemaError(f"{path}.kind", f"not a selection kind: {kind!r}")
    mapping_tag = obj.get("type", "single")
    if mapping_tag not in MAPPING_TAGS:
        raise OperatorSchemaError(f"{path}.type", f"not a mapping tag: {mapping_tag!r}")
    op = obj["op"]
    if op not in PREDICATE_OPS:
        raise OperatorSchemaError(f"{path}.op", f"not a predicate op: {op!r}")
    fieldname = obj["field"]
    if not isinstance(fieldname, str):
        raise OperatorSchemaError(f"{path}.field", "must be a string")
    value = _literal_from_json(obj.get("value"), f"{path}.value")
    pred = Predicate(fieldname, op, value)
    _validate_predicate(pred, kind, path)
    return SelectionSpec(view=view, kind=kind, predicate=pred, mapping_tag=mapping_tag)


def _validate_predicate(pred: Predicate, sel_kind: str, path: str) -> None:
    if sel_kind == "interval":
        if pred.op != "in":
            raise OperatorSchemaError(f"{path}.op", "interval selections use op 'in'")
        v = pred.value
        if not (isinstance(v, tuple) and len(v) == 2):
            raise OperatorSchemaError(f"{path}.value", "interval requires a (low, high) pair")
        low, high = v
        try:
            if low > high:
                raise OperatorSchemaError(f"{path}.value", "interval requires low <= high")
        except TypeError:
            raise OperatorSchemaError(f"{path}.value", "interval bounds must be comparable") from None
    elif pred.op == "in":
        if not isinstance(pred.value, tuple):
            raise OperatorSchemaError(f"{path}.value", "'in' requires a list of literals")


_NONE_ACTION_KINDS = {"select", "coordinate", "load", "undo", "checkout", "clear"}


def validate_node(node: OperatorNode, path: str = "$") -> None:
    """Structural invariants common to both parse surfaces."""
    if node.kind in ("combine", "synthesize"):
        if not node.children:
            raise OperatorSchemaError(f"{path}.ops", f"{node.kind} requires a non-empty pipeline")
    elif node.children:
        raise OperatorSchemaError(f"{path}.ops", f"{node.kind} takes no sub-operations")

    if node.kind == "synthesize":
        if not node.name:
            raise OperatorSchemaError(f"{path}.name", "synthesize requires a new operator name")
        if not _IDENT_RE.fullmatch(node.name):
            raise OperatorSchemaError(f"{path}.name", f"not an identifier: {node.name!r}")
    elif node.name is not None:
        raise OperatorSchemaError(f"{path}.name", f"{node.kind} takes no name")

    if node.kind in _NONE_ACTION_KINDS and node.action != "none":
        raise OperatorSchemaError(f"{path}.action", f"{node.kind} takes no action")

    if node.kind == "select":
        if not node.view:
            raise OperatorSchemaError(f"{path}.view", "select requires a view")
        if node.selection is None:
            raise OperatorSchemaError(f"{path}.selection", "select requires a selection")
    elif node.selection is not None:
        raise OperatorSchemaError(f"{path}.selection", f"{node.kind} takes no selection")

    if node.kind == "coordinate":
        if not node.view:
            raise OperatorSchemaError(f"{path}.view", "coordinate requires a source view")
        if "target" not in node.params:
            raise OperatorSchemaError(f"{path}.params.target", "coordinate requires a target view")
    if node.kind == "checkout" and not isinstance(node.params.get("version"), int):
        raise OperatorSchemaError(f"{path}.params.version", "checkout requires an integer version")
    if node.kind == "load" and not isinstance(node.params.get("path"), str):
        raise OperatorSchemaError(f"{path}.params.path", "load requires a path")
