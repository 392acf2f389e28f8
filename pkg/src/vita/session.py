"""Session lifecycle: one live state, serialized mutations, per-op commits.

apply() is the single write path: parse -> compile -> execute -> commit.
Failed operations leave the head untouched. ``undo`` and ``checkout`` only
move the head pointer (restoring the stored snapshot); the next successful
operation then commits under that parent, forming a branch.
"""

from __future__ import annotations

import itertools
import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .command import parse_command
from .compiler import FrameSchema, ViewSchema, compile_node, table_view_schema
from .coordination import table_filter
from .csv_load import load_csv_text
from .dtypes import format_dtype, value_to_json
from .errors import RangeError, UnknownVersionError, VitaError
from .executor import execute_plan
from .nodes import OperatorNode, parse_json
from .registry import register_synthesized
from .state import SessionState
from .versioning import VersionStore
from .viz import to_vegalite

DEFAULT_PAGE_LIMIT = 50
_session_counter = itertools.count(1)


@dataclass
class ApplyResult:
    version_id: int
    effects: list[dict] = field(default_factory=list)
    new_viz: list[dict] = field(default_factory=list)
    table: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "version_id": self.version_id,
            "effects": self.effects,
            "new_viz": self.new_viz,
            "table": self.table,
        }


class Session:
    def __init__(self, session_id: str, store: VersionStore, state: SessionState, head: int):
        self.session_id = session_id
        self.store = store
        self.state = state
        self.head = head
        self._lock = threading.Lock()

    # --- construction ---

    @classmethod
    def create(
        cls,
        session_dir: str | Path,
        csv_path: str | Path | None = None,
        csv_bytes: bytes | None = None,
        text_columns: Sequence[str] = (),
        delimiter: str = ",",
        session_id: str | None = None,
    ) -> "Session":
        session_id = session_id or f"s{next(_session_counter)}"
        session_dir = Path(session_dir)
        session_dir.mkdir(parents=True, exist_ok=True)
        if csv_bytes is not None:
            csv_path = session_dir / "upload.csv"
            csv_path.write_bytes(csv_bytes)
        csv_path = Path(csv_path)
        frame = load_csv_text(
            csv_path.read_text(encoding="utf-8"), text_columns=text_columns, delimiter=delimiter
        )
        state = SessionState(frame)
        record = OperatorNode(
            kind="load",
            params={
                "path": str(csv_path),
                "alias": "frame",
                "text_columns": tuple(text_columns),
                "delimiter": delimiter,
            },
        )
        store = VersionStore(session_dir)
        node = store.commit(state, record, parent_id=None)
        state.frame = state.frame.with_provenance(node.version_id)
        return cls(session_id, store, state, node.version_id)

    @classmethod
    def open(cls, session_dir: str | Path, session_id: str | None = None) -> "Session":
        store = VersionStore(session_dir)
        if not store.nodes:
            raise UnknownVersionError("session directory has no committed versions")
        head = store.nodes[-1].version_id
        return cls(session_id or f"s{next(_session_counter)}", store, store.checkout(head), head)

    # --- the write path ---

    def apply(self, source: str, payload: Any) -> ApplyResult:
        node = self._parse(source, payload)
        return self.apply_node(node)

    def _parse(self, source: str, payload: Any) -> OperatorNode:
        if source == "command":
            return parse_command(payload)
        if source == "json":
            if isinstance(payload, (dict, list)):
                payload = json.dumps(payload)
            return parse_json(payload)
        raise VitaError(f"unknown payload source {source!r} (use 'json' or 'command')")

    def apply_node(self, node: OperatorNode) -> ApplyResult:
        with self._lock:
            if node.kind == "undo":
                parent = self.store.node(self.head).parent_id
                if parent is None:
                    raise UnknownVersionError(f"version {self.head} has no parent to undo to")
                return self._move_head(parent)
            if node.kind == "checkout":
                return self._move_head(node.params["version"])

            plan = compile_node(
                node,
                FrameSchema.of_frame(self.state.frame),
                self.view_schemas(),
                self.state.registry,
            )
            outcome = execute_plan(plan, self.state)
            if plan.registration is not None:
                name, template = plan.registration
                outcome.state.registry = register_synthesized(
                    outcome.state.registry, name, template
                )
            committed = self.store.commit(outcome.state, node, parent_id=self.head)
            outcome.state.frame = outcome.state.frame.with_provenance(committed.version_id)
            self.state = outcome.state
            self.head = committed.version_id
            return ApplyResult(
                version_id=self.head,
                effects=[e.to_dict() for e in outcome.effects],
                new_viz=[self._viz_entry(v) for v in outcome.new_views],
                table=self._table_page(0, DEFAULT_PAGE_LIMIT),
            )

    def _move_head(self, version_id: int) -> ApplyResult:
        state = self.store.checkout(version_id)
        self.state = state
        self.head = version_id
        return ApplyResult(version_id=self.head, table=self._table_page(0, DEFAULT_PAGE_LIMIT))

    # --- reads ---

    def view_schemas(self) -> dict[str, ViewSchema]:
        return _schemas_for(self.state)

    def table_page(self, offset: int = 0, limit: int = DEFAULT_PAGE_LIMIT) -> dict:
        with self._lock:
            return self._table_page(offset, limit)

    def _table_page(self, offset: int, limit: int) -> dict:
        if offset < 0 or limit < 0:
            raise RangeError(f"offset and limit must be non-negative, got {offset}, {limit}")
        frame = self.state.frame
        filter_ids = table_filter(self.state.graph)
        if filter_ids is None:
            visible = list(frame.row_ids)
        else:
            allowed = set(filter_ids)
            visible = [rid for rid in frame.row_ids if rid in allowed]
        page_ids = visible[offset : offset + limit]
        index = {rid: i for i, rid in enumerate(frame.row_ids)}
        rows = []
        for rid in page_ids:
            i = index[rid]
            row = {"row_id": rid}
            for col in frame.columns:
                row[col.name] = value_to_json(col.values[i], col.dtype)
            rows.append(row)
        return {
            "columns": [{"name": c.name, "dtype": format_dtype(c.dtype)} for c in frame.columns],
            "rows": rows,
            "total": len(visible),
            "offset": offset,
            "limit": limit,
            "version_id": self.head,
            "filtered": filter_ids is not None,
        }

    def _viz_entry(self, view_id: str) -> dict:
        spec = self.state.viz[view_id]
        return {
            "view_id": view_id,
            "spec": spec.to_dict(),
            "vegalite": json.loads(to_vegalite(spec)),
        }

    def viz_list(self) -> list[dict]:
        with self._lock:
            return [self._viz_entry(v) for v in sorted(self.state.viz)]

    def history(self) -> list[dict]:
        return [n.to_dict() for n in self.store.history()]

    def operator_names(self) -> tuple[str, ...]:
        return self.state.registry.names()


def replay(store: VersionStore, upto: int | None = None) -> tuple[SessionState, list[dict[str, str]]]:
    """Re-execute the recorded operator chain from the root.

    Returns the final state and the digest bundle of every replayed version,
    in order. Branches are followed root-to-``upto`` (default: last node).
    """
    target = store.nodes[-1].version_id if upto is None else upto
    chain: list = []
    node = store.node(target)
    while node is not None:
        chain.append(node)
        node = store.node(node.parent_id) if node.parent_id is not None else None
    chain.reverse()

    state: SessionState | None = None
    digests: list[dict[str, str]] = []
    for version in chain:
        record = parse_json(version.operator_record)
        if record.kind == "load":
            frame = load_csv_text(
                Path(record.params["path"]).read_text(encoding="utf-8"),
                text_columns=record.params.get("text_columns", ()),
                delimiter=record.params.get("delimiter", ","),
            )
            state = SessionState(frame)
        else:
            schema = FrameSchema.of_frame(state.frame)
            views = _schemas_for(state)
            plan = compile_node(record, schema, views, state.registry)
            outcome = execute_plan(plan, state)
            if plan.registration is not None:
                outcome.state.registry = register_synthesized(
                    outcome.state.registry, *plan.registration
                )
            state = outcome.state
        digests.append(state.digests())
    return state, digests


def _schemas_for(state: SessionState) -> dict[str, ViewSchema]:
    schema = FrameSchema.of_frame(state.frame)
    views: dict[str, ViewSchema] = {"table": table_view_schema(schema)}
    for view_id, spec in state.viz.items():
        fields: set[str] = set()
        for rec in spec.data:
            fields.update(rec)
        if spec.source_binding is not None:
            fields.add(spec.source_binding.key_field)
        one_to_many = (
            spec.source_binding is not None and spec.source_binding.key_field != "row_id"
        )
        views[view_id] = ViewSchema(view_id, "chart", frozenset(fields), one_to_many)
    return views
