"""View-link graph and cross-view selection propagation.

Views form a directed graph: a link (source -> target) means a selection in
the source triggers an effect in the target (filter for tables, highlight for
charts). Cycles are rejected, with one special case: a bidirectional pair may
be declared as two explicit unidirectional links provided the back edge is
highlight-only, which keeps propagation from oscillating.

Selection semantics are independent: the newest selection supersedes any
prior one, whatever its origin. Row ids are the common currency: a selection
resolves to a row-id set at its origin and that set flows unchanged along
links; each target renders it through its own binding (single/multi tags on
links record the declared mark-to-row cardinality).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from .errors import CycleError, DuplicateLinkError, PredicateError, UnknownViewError
from .frame import VitaFrame
from .engine.filters import filter_rows, interval_rows
from .nodes import Predicate, SelectionSpec
from .viz import VizSpec

TABLE_VIEW = "table"


@dataclass(frozen=True)
class ViewNode:
    view_id: str
    kind: str  # table | chart
    # mark key -> covered row ids; None for the table (rows are the marks)
    binding: Mapping[Any, tuple[int, ...]] | None = None


@dataclass(frozen=True)
class CoordinationLink:
    source: str
    target: str
    source_tag: str = "single"
    target_tag: str = "multi"
    triggered_op: str = "filter"  # filter | highlight


@dataclass(frozen=True)
class Effect:
    view: str
    effect: str  # filter | highlight | reset
    row_ids: tuple[int, ...] = ()
    marks: tuple = ()

    def to_dict(self) -> dict:
        return {
            "view": self.view,
            "effect": self.effect,
            "row_ids": list(self.row_ids),
            "marks": list(self.marks),
        }


@dataclass(frozen=True)
class ActiveSelection:
    origin: str
    selection: SelectionSpec
    row_ids: tuple[int, ...]
    affected: tuple[tuple[str, str], ...]  # (view, effect) pairs this selection renders

    def affected_views(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.affected)


@dataclass
class CoordinationGraph:
    views: dict[str, ViewNode] = field(default_factory=dict)
    links: list[CoordinationLink] = field(default_factory=list)
    active: ActiveSelection | None = None

    def copy(self) -> "CoordinationGraph":
        return CoordinationGraph(dict(self.views), list(self.links), self.active)


def new_graph() -> CoordinationGraph:
    return CoordinationGraph(views={TABLE_VIEW: ViewNode(TABLE_VIEW, "table")})


def _successors(links: list[CoordinationLink], view: str) -> list[CoordinationLink]:
    return sorted(
        (l for l in links if l.source == view), key=lambda l: l.target
    )


def _reachable(links: list[CoordinationLink], start: str) -> set[str]:
    seen: set[str] = set()
    queue = [start]
    while queue:
        u = queue.pop()
        for l in _successors(links, u):
            if l.target not in seen:
                seen.add(l.target)
                queue.append(l.target)
    return seen


def coordinate(graph: CoordinationGraph, link: CoordinationLink) -> CoordinationGraph:
    """Add one link; the result is a new graph, the input is untouched."""
    for v in (link.source, link.target):
        if v not in graph.views:
            raise UnknownViewError(f"no view named {v!r}")
    if link.source == link.target:
        raise DuplicateLinkError("a view cannot coordinate with itself")
    if any(l.source == link.source and l.target == link.target for l in graph.links):
        raise DuplicateLinkError(f"link {link.source} -> {link.target} already exists")

    if link.source in _reachable(graph.links, link.target):
        back = [l for l in graph.links if l.source == link.target and l.target == link.source]
        others = [l for l in graph.links if l not in back]
        is_plain_pair = bool(back) and link.source not in _reachable(others, link.target)
        if not (is_plain_pair and link.triggered_op == "highlight"):
            raise CycleError(
                f"link {link.source} -> {link.target} would create a coordination cycle "
                "(a reverse link must be highlight-only)"
            )

    out = graph.copy()
    out.links.append(link)
    return out


def resolve_selection(
    selection: SelectionSpec,
    view: ViewNode,
    frame: VitaFrame,
    viz_catalog: Mapping[str, VizSpec],
) -> tuple[tuple[int, ...], tuple]:
    """Resolve a selection at its origin into (row ids, matched mark keys)."""
    pred = selection.predicate
    if view.kind == "table":
        if selection.kind == "interval":
            low, high = pred.value
            ids = interval_rows(frame, pred.field, low, high)
        else:
            ids = filter_rows(frame, pred.field, pred.op, pred.value)
        return tuple(sorted(ids)), tuple(sorted(ids))

    spec = viz_catalog.get(view.view_id)
    if spec is None or spec.source_binding is None:
        raise PredicateError(f"view {view.view_id!r} has no selectable data")
    key_field = spec.source_binding.key_field
    marks = []
    for rec in spec.data:
        if pred.field not in rec:
            raise PredicateError(f"view {view.view_id!r} has no field {pred.field!r}")
        cell = rec[pred.field]
        if _mark_matches(cell, pred, selection.kind):
            marks.append(rec[key_field])
    binding = view.binding or {}
    ids: set[int] = set()
    for m in marks:
        ids.update(binding.get(m, ()))
    return tuple(sorted(ids)), tuple(marks)


def _mark_matches(cell: Any, pred: Predicate, sel_kind: str) -> bool:
    if sel_kind == "interval":
        low, high = pred.value
        try:
            return low <= cell <= high
        except TypeError:
            raise PredicateError("interval bounds do not match the field type") from None
    op, value = pred.op, pred.value
    try:
        if op == "==":
            return cell == value
        if op == "!=":
            return cell != value
        if op == "<":
            return cell < value
        if op == "<=":
            return cell <= value
        if op == ">":
            return cell > value
        if op == ">=":
            return cell >= value
        if op == "in":
            return cell in value
    except TypeError:
        raise PredicateError(f"cannot compare chart field with {value!r}") from None
    raise PredicateError(f"op {op!r} is not defined on chart fields")


def _marks_covering(view: ViewNode, ids: set[int]) -> tuple:
    if view.binding is None:
        return tuple(sorted(ids))
    hit = [k for k, rows in view.binding.items() if ids.intersection(rows)]
    try:
        return tuple(sorted(hit))
    except TypeError:
        return tuple(sorted(hit, key=str))


def propagate(
    graph: CoordinationGraph,
    selection: SelectionSpec,
    frame: VitaFrame,
    viz_catalog: Mapping[str, VizSpec],
) -> tuple[list[Effect], CoordinationGraph]:
    """Resolve a selection, fan it out along links, supersede any prior one.

    Returns the effect list plus the updated graph. Effects cover the origin,
    every reachable target (breadth-first, deterministic order), and a reset
    for each view that rendered the previous selection but is untouched by
    this one.
    """
    origin = graph.views.get(selection.view)
    if origin is None:
        raise UnknownViewError(f"no view named {selection.view!r}")

    row_ids, origin_marks = resolve_selection(selection, origin, frame, viz_catalog)
    ids = set(row_ids)

    effects: dict[str, Effect] = {}
    effects[origin.view_id] = Effect(origin.view_id, "highlight", tuple(sorted(ids)), origin_marks)

    queue = [origin.view_id]
    while queue:
        u = queue.pop(0)
        for link in _successors(graph.links, u):
            if link.target in effects:
                continue
            target = graph.views[link.target]
            if link.triggered_op == "filter" and target.kind == "table":
                eff = Effect(link.target, "filter", tuple(sorted(ids)), ())
            else:
                eff = Effect(
                    link.target, "highlight", tuple(sorted(ids)), _marks_covering(target, ids)
                )
            effects[link.target] = eff
            queue.append(link.target)

    prior = graph.active.affected_views() if graph.active else ()
    resets = [Effect(v, "reset") for v in sorted(prior) if v not in effects]

    out = graph.copy()
    out.active = ActiveSelection(
        origin.view_id,
        selection,
        tuple(sorted(ids)),
        tuple((v, e.effect) for v, e in effects.items()),
    )
    return list(effects.values()) + resets, out


def clear(
    graph: CoordinationGraph, scope: str = "all"
) -> tuple[list[Effect], CoordinationGraph]:
    """Drop the active selection (``scope`` = its origin view or ``all``)."""
    if scope != "all" and scope not in graph.views:
        raise UnknownViewError(f"no view named {scope!r}")
    if graph.active is None:
        return [], graph
    if scope != "all" and graph.active.origin != scope:
        return [], graph
    effects = [Effect(v, "reset") for v in sorted(graph.active.affected_views())]
    out = graph.copy()
    out.active = None
    return effects, out


def table_filter(graph: CoordinationGraph) -> tuple[int, ...] | None:
    """The row-id filter currently applied to the table, if any."""
    if graph.active is None:
        return None
    if (TABLE_VIEW, "filter") in graph.active.affected:
        return graph.active.row_ids
    return None


# --- canonical serialization for versioning ---

def graph_to_dict(graph: CoordinationGraph) -> dict:
    def binding_out(b):
        return None if b is None else {str(k): list(v) for k, v in b.items()}

    active = None
    if graph.active is not None:
        sel = graph.active.selection
        active = {
            "origin": graph.active.origin,
            "selection": {
                "view": sel.view,
                "kind": sel.kind,
                "field": sel.predicate.field,
                "op": sel.predicate.op,
                "value": list(sel.predicate.value)
                if isinstance(sel.predicate.value, tuple)
                else sel.predicate.value,
                "type": sel.mapping_tag,
            },
            "row_ids": list(graph.active.row_ids),
            "affected": [list(pair) for pair in graph.active.affected],
        }
    return {
        "views": [
            {
                "view_id": v.view_id,
                "kind": v.kind,
                "binding": binding_out(v.binding),
                "key_is_int": _binding_key_is_int(v.binding),
            }
            for v in sorted(graph.views.values(), key=lambda v: v.view_id)
        ],
        "links": [
            {
                "source": l.source,
                "target": l.target,
                "source_tag": l.source_tag,
                "target_tag": l.target_tag,
                "triggered_op": l.triggered_op,
            }
            for l in graph.links
        ],
        "active": active,
    }


def _binding_key_is_int(binding) -> bool:
    if not binding:
        return False
    return all(isinstance(k, int) for k in binding)


def graph_from_dict(d: dict) -> CoordinationGraph:
    views = {}
    for v in d["views"]:
        binding = None
        if v["binding"] is not None:
            conv = int if v.get("key_is_int") else str
            binding = {conv(k): tuple(ids) for k, ids in v["binding"].items()}
        views[v["view_id"]] = ViewNode(v["view_id"], v["kind"], binding)
    links = [
        CoordinationLink(
            l["source"], l["target"], l["source_tag"], l["target_tag"], l["triggered_op"]
        )
        for l in d["links"]
    ]
    active = None
    if d["active"] is not None:
        a = d["active"]
        value = a["selection"]["value"]
        if isinstance(value, list):
            value = tuple(value)
        sel = SelectionSpec(
            a["selection"]["view"],
            a["selection"]["kind"],
            Predicate(a["selection"]["field"], a["selection"]["op"], value),
            a["selection"]["type"],
        )
        active = ActiveSelection(
            a["origin"],
            sel,
            tuple(a["row_ids"]),
            tuple((v, e) for v, e in a["affected"]),
        )
    return CoordinationGraph(views, links, active)
