"""Rule-based translation of operator nodes into fully-defaulted plans.

Parsed nodes may leave out the action, the input column, output names, and
most parameters; compilation fills every blank from a fixed defaulting table
and typechecks the result end-to-end against the frame schema, threading the
schema through the plan so steps may consume columns created by earlier
steps. Defaults:

* action — project: update, mutate: create, aggregate: add, set: add,
  visualize: create (a new view).
* input column — the frame's single Text column if there is exactly one.
* created column name — ``<column>_<udf>`` unless ``out`` is given.
* metadata key — the udf name unless ``key`` is given.
* bar charts — top 15 categories by descending value, ties broken by key;
  scatter — x/y from the first two vector dimensions, tooltip = row id.

There is no implicit type coercion: mismatches are compile errors carrying
the path of the node that caused them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Any, Mapping

from .dtypes import DomainType, format_dtype
from .errors import (
    ActionIncompatibleError,
    CompileError,
    MissingParamError,
    PlanTypeError,
    UnknownOperatorError,
    UnknownViewError,
)
from .errors import UnknownColumnError as FrameUnknownColumn
from .frame import VitaFrame
from .nodes import OperatorNode, TRANSFORM_KINDS
from .registry import OperatorRegistry, UdfInfo, register_synthesized

DEFAULT_ACTIONS = {
    "project": "update",
    "mutate": "create",
    "aggregate": "add",
    "set": "add",
    "visualize": "create",
}
ALLOWED_ACTIONS = {
    "project": ("update", "create"),
    "mutate": ("update", "create"),
    "aggregate": ("add",),
    "set": ("add",),
    "visualize": ("create",),
}


class UnknownColumnError(CompileError):
    """Compile-time column resolution failure (distinct from the frame error)."""


@dataclass(frozen=True)
class PlanStep:
    op: str
    inputs: tuple[str, ...]
    output: str
    action: str
    params: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Plan:
    steps: tuple[PlanStep, ...] = ()
    # Set for synthesize nodes: (name, template) the session registers on commit.
    registration: tuple[str, OperatorNode] | None = None


def explain(plan: Plan) -> str:
    """Deterministic one-line-per-step dump, stable for golden-file tests."""
    lines = []
    for i, s in enumerate(plan.steps, start=1):
        src = ",".join(s.inputs) if s.inputs else "-"
        dst = s.output or "-"
        params = ",".join(f"{k}={json.dumps(v, sort_keys=True)}" for k, v in sorted(s.params.items()))
        lines.append(f"step {i}: {s.op} ({src} -> {dst}) action={s.action} params={{{params}}}")
    return "\n".join(lines)


@dataclass
class FrameSchema:
    """Column and metadata types visible at one point in a plan."""

    columns: dict[str, DomainType]
    metadata: dict[str, dict[str, DomainType]]

    @classmethod
    def of_frame(cls, frame: VitaFrame) -> "FrameSchema":
        return cls(
            {c.name: c.dtype for c in frame.columns},
            {c.name: {k: dt for k, (dt, _) in c.metadata.items()} for c in frame.columns},
        )

    def copy(self) -> "FrameSchema":
        return FrameSchema(dict(self.columns), {k: dict(v) for k, v in self.metadata.items()})


@dataclass(frozen=True)
class ViewSchema:
    view_id: str
    kind: str  # table | chart
    fields: frozenset[str]
    one_to_many: bool  # True when one mark can cover several rows


def table_view_schema(schema: FrameSchema) -> ViewSchema:
    return ViewSchema("table", "table", frozenset(schema.columns) | {"row_id"}, False)


def compile_node(
    node: OperatorNode,
    schema: FrameSchema,
    views: Mapping[str, ViewSchema],
    registry: OperatorRegistry,
) -> Plan:
    """Translate one node (possibly composite) into an executable plan."""
    ctx = _Context(schema.copy(), dict(views), registry)
    if node.kind == "synthesize":
        _validate_template(node, registry, "$")
        if registry.is_builtin(node.name) or registry.template(node.name) is not None:
            raise CompileError(f"operator name {node.name!r} is already taken", "$.name")
        return Plan(steps=(), registration=(node.name, node))
    steps = ctx.compile(node, "$")
    return Plan(steps=tuple(steps))


class _Context:
    def __init__(self, schema: FrameSchema, views: dict[str, ViewSchema], registry: OperatorRegistry):
        self.schema = schema
        self.views = views
        self.registry = registry

    # --- helpers ---

    def _next_view_id(self) -> str:
        n = 1
        while f"v{n}" in self.views:
            n += 1
        return f"v{n}"

    def _resolve_column(self, node: OperatorNode, path: str) -> str:
        if node.column is not None:
            if node.column not in self.schema.columns:
                raise UnknownColumnError(f"no column named {node.column!r}", path)
            return node.column
        text_cols = [n for n, dt in self.schema.columns.items() if dt.tag == "Text"]
        if len(text_cols) == 1:
            return text_cols[0]
        raise UnknownColumnError(
            "no input column given and the frame does not have exactly one Text column", path
        )

    def _check_params(self, node: OperatorNode, info: UdfInfo, path: str) -> dict[str, Any]:
        allowed = set(info.defaults) | set(info.extra_params) | {"out", "key", "view"}
        for k in node.params:
            if k not in allowed:
                raise CompileError(f"unknown parameter {k!r} for {info.name}", f"{path}.params.{k}")
        merged = dict(info.defaults)
        for k, v in node.params.items():
            if k in info.defaults and not isinstance(v, type(info.defaults[k])):
                # ints are acceptable where a float default sits, nothing else
                if not (isinstance(info.defaults[k], float) and isinstance(v, int)):
                    raise PlanTypeError(
                        f"parameter {k!r} expects {type(info.defaults[k]).__name__}",
                        path=f"{path}.params.{k}",
                    )
            merged[k] = v
        return merged

    # --- main dispatch ---

    def compile(self, node: OperatorNode, path: str) -> list[PlanStep]:
        kind = node.kind
        if kind == "combine":
            return self._compile_combine(node, path)
        if kind in TRANSFORM_KINDS:
            return [self._compile_transform(node, path)]
        if kind == "select":
            return [self._compile_select(node, path)]
        if kind == "coordinate":
            return [self._compile_coordinate(node, path)]
        if kind == "load":
            params = {"delimiter": ",", "text_columns": (), "alias": "frame"}
            params.update(node.params)
            return [PlanStep("load", (), "frame", "none", params)]
        if kind == "clear":
            if node.view is not None and node.view != "all" and node.view not in self.views:
                raise UnknownViewError(f"no view named {node.view!r}", path)
            return [PlanStep("clear", (node.view or "all",), "", "none", {})]
        if kind in ("undo", "checkout"):
            return [PlanStep(kind, (), "", "none", dict(node.params))]
        if kind == "synthesize":
            raise CompileError("synthesize cannot be nested inside a pipeline", path)
        # A name that is not a built-in kind refers to a registered composite.
        template = self.registry.template(kind)
        if template is None:
            raise UnknownOperatorError(f"unknown operator {kind!r}", path)
        steps: list[PlanStep] = []
        for i, child in enumerate(template.children):
            inherited = _inherit(child, node.column, node.action)
            steps.extend(self.compile(inherited, f"{path}.ops[{i}]"))
        return steps

    def _compile_combine(self, node: OperatorNode, path: str) -> list[PlanStep]:
        steps: list[PlanStep] = []
        for i, child in enumerate(node.children):
            inherited = _inherit(child, node.column, node.action)
            steps.extend(self.compile(inherited, f"{path}.ops[{i}]"))
        return steps

    def _compile_transform(self, node: OperatorNode, path: str) -> PlanStep:
        if node.udf is None:
            raise MissingParamError(f"{node.kind} requires a function name", path)
        info = self.registry.udf(node.udf)
        if info is None:
            raise UnknownOperatorError(f"unknown function {node.udf!r}", path)
        if info.kind != node.kind:
            raise UnknownOperatorError(
                f"{node.udf!r} is a {info.kind} function, not {node.kind}", path
            )

        action = node.action if node.action != "none" else DEFAULT_ACTIONS[node.kind]
        if action not in ALLOWED_ACTIONS[node.kind]:
            raise ActionIncompatibleError(
                f"{node.kind} cannot use action {action!r} "
                f"(allowed: {', '.join(ALLOWED_ACTIONS[node.kind])})",
                path,
            )

        params = self._check_params(node, info, path)
        if node.kind == "visualize":
            return self._compile_visualize(node, info, params, path)

        column = self._resolve_column(node, path)
        in_dtype = self.schema.columns[column]
        if not info.input_check(in_dtype):
            raise PlanTypeError(
                f"{info.name} on {column!r}: expected {info.expected}, found {format_dtype(in_dtype)}",
                expected=info.expected,
                found=format_dtype(in_dtype),
                path=path,
            )
        if info.name == "mean_score_per_token":
            vocab_dt = self.schema.metadata.get(column, {}).get("vocabulary")
            if vocab_dt is None or format_dtype(vocab_dt) != "List(String)":
                raise PlanTypeError(
                    f"mean_score_per_token on {column!r}: column has no vocabulary metadata "
                    "(is it a tfidf output?)",
                    path=path,
                )

        out_dtype = info.output(in_dtype)
        out = params.pop("out", None)
        key = params.pop("key", None)
        params.pop("view", None)
        if action == "update":
            if out is not None:
                raise CompileError("'out' only applies to action=create", f"{path}.params.out")
            output = column
            self.schema.columns[column] = out_dtype
            self.schema.metadata[column] = {}
        elif action == "create":
            output = out or f"{column}_{info.name}"
            if output in self.schema.columns:
                raise CompileError(f"column {output!r} already exists", path)
            self.schema.columns[output] = out_dtype
            self.schema.metadata[output] = {}
        else:  # add
            output = f"{column}.{key or info.name}"
            self.schema.metadata.setdefault(column, {})[key or info.name] = out_dtype
        return PlanStep(info.name, (column,), output, action, params)

    def _compile_visualize(
        self, node: OperatorNode, info: UdfInfo, params: dict[str, Any], path: str
    ) -> PlanStep:
        column = self._resolve_column(node, path)
        in_dtype = self.schema.columns[column]
        params.pop("out", None)
        view_id = params.pop("view", None) or node.view or self._next_view_id()
        if view_id in self.views:
            raise CompileError(f"view {view_id!r} already exists", path)

        if info.name == "bar":
            key = params.pop("key", None)
            meta = self.schema.metadata.get(column, {})
            if key is None:
                dict_keys = [k for k, dt in meta.items() if format_dtype(dt) == "Dictionary(String,Float)"]
                if len(dict_keys) == 1:
                    key = dict_keys[0]
            if key is not None:
                if key not in meta:
                    raise PlanTypeError(f"column {column!r} has no metadata {key!r}", path=path)
                if format_dtype(meta[key]) != "Dictionary(String,Float)":
                    raise PlanTypeError(
                        f"bar needs Dictionary(String,Float) metadata, {key!r} is {format_dtype(meta[key])}",
                        path=path,
                    )
                params["key"] = key
            elif "category" in node.params and "value" in node.params:
                for role in ("category", "value"):
                    name = node.params[role]
                    if name not in self.schema.columns:
                        raise UnknownColumnError(f"no column named {name!r}", f"{path}.params.{role}")
                params["category"] = node.params["category"]
                params["value"] = node.params["value"]
            else:
                raise PlanTypeError(
                    f"bar on {column!r} needs a score-dictionary metadata or category/value columns",
                    path=path,
                )
            fields = frozenset({"token", "score"})
            one_to_many = True
        else:  # scatter
            if not info.input_check(in_dtype):
                raise PlanTypeError(
                    f"scatter on {column!r}: expected {info.expected}, found {format_dtype(in_dtype)}",
                    expected=info.expected,
                    found=format_dtype(in_dtype),
                    path=path,
                )
            color = params.pop("color", None)
            if color is None:
                int_cols = [n for n, dt in self.schema.columns.items() if dt.tag == "Int"]
                if len(int_cols) == 1:
                    color = int_cols[0]
            elif color not in self.schema.columns:
                raise UnknownColumnError(f"no column named {color!r}", f"{path}.params.color")
            if color is not None:
                params["color"] = color
            fields = frozenset({"x", "y", "row_id"} | ({"cluster"} if color else set()))
            one_to_many = False

        self.views[view_id] = ViewSchema(view_id, "chart", fields, one_to_many)
        return PlanStep(info.name, (column,), view_id, "create", params)

    def _compile_select(self, node: OperatorNode, path: str) -> PlanStep:
        sel = node.selection
        view = self.views.get(node.view)
        if view is None:
            raise UnknownViewError(f"no view named {node.view!r}", path)
        if sel.predicate.field not in view.fields:
            raise UnknownColumnError(
                f"view {node.view!r} has no field {sel.predicate.field!r}", path
            )
        params = {
            "kind": sel.kind,
            "field": sel.predicate.field,
            "op": sel.predicate.op,
            "value": sel.predicate.value,
            "tag": sel.mapping_tag,
        }
        return PlanStep("select", (node.view,), "", "none", params)

    def _compile_coordinate(self, node: OperatorNode, path: str) -> PlanStep:
        source = node.view
        target = node.params["target"]
        for v in (source, target):
            if v not in self.views:
                raise UnknownViewError(f"no view named {v!r}", path)
        on_field = node.params.get("on")
        if on_field is not None and on_field not in self.views[source].fields:
            raise UnknownColumnError(f"view {source!r} has no field {on_field!r}", path)
        source_tag = node.params.get("source_tag", "single")
        target_tag = node.params.get("tag") or (
            "multi" if self.views[source].one_to_many else "single"
        )
        effect = node.params.get("effect") or (
            "filter" if self.views[target].kind == "table" else "highlight"
        )
        if effect not in ("filter", "highlight"):
            raise CompileError(f"unknown effect {effect!r}", f"{path}.params.effect")
        params = {
            "on": on_field or "row_id",
            "source_tag": source_tag,
            "target_tag": target_tag,
            "effect": effect,
        }
        return PlanStep("coordinate", (source, target), "", "none", params)


def _inherit(child: OperatorNode, column: str | None, action: str) -> OperatorNode:
    """Pipeline children inherit the parent's column and action unless they set
    their own. Inheritance is a defaulting mechanism: an action the child's
    kind cannot take is not forced on it (the kind default applies instead),
    so a cleaning combine can still end in a metadata-producing set step."""
    updates = {}
    if child.column is None and column is not None:
        updates["column"] = column
    if child.action == "none" and action != "none":
        if child.kind not in ALLOWED_ACTIONS or action in ALLOWED_ACTIONS[child.kind]:
            updates["action"] = action
    return replace(child, **updates) if updates else child


def _validate_template(node: OperatorNode, registry: OperatorRegistry, path: str) -> None:
    """Schema-generic check of a synthesize template: functions must exist and
    kinds/actions must be coherent; column typing waits for the use site."""
    for i, child in enumerate(node.children):
        cpath = f"{path}.ops[{i}]"
        if child.kind == "combine":
            _validate_template(child, registry, cpath)
        elif child.kind in TRANSFORM_KINDS:
            if child.udf is None:
                raise MissingParamError(f"{child.kind} requires a function name", cpath)
            info = registry.udf(child.udf)
            if info is None:
                raise UnknownOperatorError(f"unknown function {child.udf!r}", cpath)
            if info.kind != child.kind:
                raise UnknownOperatorError(
                    f"{child.udf!r} is a {info.kind} function, not {child.kind}", cpath
                )
            if child.action != "none" and child.action not in ALLOWED_ACTIONS[child.kind]:
                raise ActionIncompatibleError(
                    f"{child.kind} cannot use action {child.action!r}", cpath
                )
        elif registry.template(child.kind) is None:
            raise UnknownOperatorError(f"unknown operator {child.kind!r}", cpath)


__all__ = [
    "FrameSchema",
    "Plan",
    "PlanStep",
    "UnknownColumnError",
    "ViewSchema",
    "compile_node",
    "explain",
    "register_synthesized",
    "table_view_schema",
]
